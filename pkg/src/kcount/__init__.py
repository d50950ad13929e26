"""Counting and sampling independent sets and matchings of a given size in bounded-degree graphs."""

__version__ = "0.1.0"
