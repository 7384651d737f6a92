"""Command-line front end and model-file format."""
