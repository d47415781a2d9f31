# Quasi-steady-state frequency estimation package
