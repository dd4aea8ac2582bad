"""
Test package for flm-maxtest.
"""

