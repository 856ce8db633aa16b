"""Graph coloring by branch and bound over sampled maximal independent sets."""
