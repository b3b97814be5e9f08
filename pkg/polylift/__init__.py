"""
Polylift - Carleman linearization of polynomial ODEs with certified truncation-error envelopes
"""
__version__ = "1.0.0"
