"""Exact tools for circular planar electrical networks.

Circular pairs and their geometry, exact rational response matrices,
network connections, electrical positroids, minor rewriting, cluster
mutation, and weak separation.
"""

__version__ = "0.1.0"
