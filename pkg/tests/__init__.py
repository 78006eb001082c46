"""Test suite for Sullivan Brane."""
