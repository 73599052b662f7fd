"""Command-line interface for chromatic-threshold-lab."""
