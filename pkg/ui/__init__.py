"""
Command-line front end and run configuration.
"""
