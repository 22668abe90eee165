"""Test package for the choosability workbench."""
