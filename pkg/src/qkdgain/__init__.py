# ABOUTME: qkdgain package initialization
# ABOUTME: Exports version information for the BB84 secure key rate calculator
"""qkdgain - secure key rate per time slot for realistic BB84 sources"""

__version__ = "0.1.0"
