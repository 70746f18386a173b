"""Exact reconstruction toolkit for the quiver algebra tower behind hh_l."""

__version__ = "0.1.0"
