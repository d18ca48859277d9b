"""Instance generators, drivers, reports and the command line."""
