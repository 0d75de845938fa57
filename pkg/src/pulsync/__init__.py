"""Self-stabilising pulse synchronisation, counting and firing squads on a lockstep simulator."""
