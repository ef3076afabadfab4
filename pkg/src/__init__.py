# Makes 'src' a package for imports.
