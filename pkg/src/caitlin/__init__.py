"""Program auralization: run mini-Pascal programs and render their control flow as music."""

__version__ = "0.1.0"
