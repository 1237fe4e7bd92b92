"""Exact computational toolkit for effective finite generation of [IA_n, IA_n]."""
