"""Test-suite configuration: nothing beyond making this directory a
pytest rootdir anchor so `import helpers` resolves for every module."""
