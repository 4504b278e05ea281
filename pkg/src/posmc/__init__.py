"""Model checking and complexity classification for positive equality-free FO."""
