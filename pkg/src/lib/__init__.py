"""Core algebra, scale, operator and kernel modules (library-first principle)."""
