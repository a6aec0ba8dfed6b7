"""Generalized metric spaces valued in involutive Heyting algebras."""
