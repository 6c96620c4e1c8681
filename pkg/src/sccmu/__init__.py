"""Modal mu-calculus and parity automata on graphs with bounded strongly connected components."""
