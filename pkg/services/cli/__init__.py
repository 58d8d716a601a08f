"""Command-line front end (``python -m services.cli``)."""
