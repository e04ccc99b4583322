# Tests package for clonalg
