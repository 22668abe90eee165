"""List coloring and choosability workbench."""
