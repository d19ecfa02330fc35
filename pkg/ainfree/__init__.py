"""Free A∞-categories generated by differential graded quivers, with exact verification."""

__version__ = "1.0.0"
