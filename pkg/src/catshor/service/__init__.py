"""HTTP service wrapping the estimation and verification core."""
