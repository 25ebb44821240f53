# coding: utf-8

# # Entropy and mutual information from binned samples
#
# Continuous samples are binned per dimension; each sample becomes a tuple of
# bin indices and probabilities are relative frequencies. Logs are base 2.

from math import log2

import numpy as np

from sfib import (
    DiscreteDistribution,
    discretize,
    empirical_distribution,
    entropy,
    joint_counts,
    kl_divergence,
    kl_joint_vs_product,
    make_bin_spec,
    mutual_information,
)

# A tiny hand-checkable case: H of [0, 0, 1, 2] is 1.5 bits.

print("H =", entropy(empirical_distribution([[0, 0, 1, 2]])))

# Binning a continuous variable. X uses its observed range, T uses [0, 1].

rng = np.random.default_rng(1)
x = rng.standard_normal((1, 100))
t = 1 / (1 + np.exp(-3 * x))
xb = discretize(x, make_bin_spec(x, 30))
tb = discretize(t, make_bin_spec(t, 30, (0.0, 1.0)))

j = joint_counts(xb, tb)
mi = mutual_information(j)
print(f"I[X;T] = {mi:.4f} bits, H[T] = {entropy(empirical_distribution(tb)):.4f} bits")

# MI is the KL divergence between the joint and the product of marginals.

print("MI - KL(joint || product) =", mi - kl_joint_vs_product(j))

# KL to the uniform distribution over all M cells is log2(M) - H.

p = empirical_distribution(tb)
q = DiscreteDistribution.uniform([(i,) for i in range(30)])
print("KL(p || uniform) =", kl_divergence(p, q), " log2(30) - H =", log2(30) - entropy(p))

# With only 100 samples, H can never exceed log2(100) ~ 6.64 bits.

print("ceiling:", log2(100))
