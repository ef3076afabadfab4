# Makes 'services' a package for imports.
