class SchemaError(ValueError):
    """A run-directory file is missing required columns or content."""
