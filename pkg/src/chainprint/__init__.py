"""Energy use and carbon footprint of PoW and PoS blockchains."""

__version__ = "0.1.0"
