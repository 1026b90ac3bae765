"""Named and random density matrices."""
