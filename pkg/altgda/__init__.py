"""altgda - alternating gradient descent-ascent in bilinear zero-sum games."""

__version__ = "1.0.0"
