"""Configuration, errors and JSON interchange for pseudoform."""
