"""Command-line layer - the argparse front end"""
