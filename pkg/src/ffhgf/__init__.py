"""Hypergeometric functions over finite fields, exact."""
