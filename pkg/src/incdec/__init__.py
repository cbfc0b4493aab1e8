"""Incremental-decremental maximization toolkit."""
