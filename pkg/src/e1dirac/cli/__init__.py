"""Scenario-driven command line front end."""

from .catalog import CATALOG, catalog_names
from .main import main
from .scenario import Scenario, parse_scenario

__all__ = ["CATALOG", "Scenario", "catalog_names", "main", "parse_scenario"]
