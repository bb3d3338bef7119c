#!/usr/bin/env python3
"""Four depth-N entropies of one observed system, side by side.

For a partition of unity F under a stochastic system the library tracks:
  hud  averaged information of the refined outcomes about the state
  mak  von Neumann entropy of the Gram state of the refined partition
  afl  von Neumann entropy of the nested measurement state
  kow  Shannon entropy of the word distribution
They always satisfy hud <= mak and hud <= afl <= kow.  hud is bounded by
S(mu), so its rate vanishes; kow of a totally mixing partition grows by
log k forever.
"""

import math

import numpy as np

from entropy_lab import (
    EntropyKind,
    PartitionOfUnity,
    entropy_sequence,
    make_markov,
    shannon_entropy,
    uniform_unsharp,
)


def table(system, f, n_max):
    seqs = {kind: entropy_sequence(system, f, kind, n_max) for kind in EntropyKind}
    print("  N       hud       mak       afl       kow")
    for i in range(n_max):
        row = "  ".join(f"{seqs[kind].values[i]:.6f}" for kind in EntropyKind)
        print(f"  {i + 1}  {row}")
    return seqs


def main():
    system = make_markov(["a", "b"], [[0.9, 0.1], [0.2, 0.8]])
    blur = PartitionOfUnity(np.array([[0.8, 0.2], [0.3, 0.7]]), labels=["L", "R"])
    s_mu = shannon_entropy(system.stationary)

    print(f"blurred chain observation, S(mu) = {s_mu:.6f}")
    seqs = table(system, blur, 6)
    print()
    print(f"hud stays below S(mu) = {s_mu:.6f}: max {seqs[EntropyKind.HUD].values.max():.6f}")
    print(f"kow grows by about {seqs[EntropyKind.KOW].increments[-1]:.6f} per step")
    print()

    mixing = uniform_unsharp(system.n_states, 2)
    seq = entropy_sequence(system, mixing, EntropyKind.KOW, 10)
    print("totally mixing partition (every response row = 1/2):")
    print(f"  kow increments: {np.round(seq.increments, 12)}")
    print(f"  log 2 =         {math.log(2):.12f}")
    hud = entropy_sequence(system, mixing, EntropyKind.HUD, 10)
    print(f"  hud values are all zero: max {hud.values.max():.3e}")
    print("pure noise carries maximal word entropy and zero state information")


if __name__ == "__main__":
    main()
