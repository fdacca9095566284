"""Exact q-series expansion engine and identity verification harness."""
