"""Bundled demo network: a toy Unet trained on the synthetic generator.

Regenerate with tools/train_toy_unet.py; the training run verifies the
frozen weights through the inference engine before overwriting anything.
"""

from importlib import resources


def toy_unet_architecture() -> str:
    return (resources.files(__name__) / "toy_unet.json").read_text(encoding="utf-8")


def toy_unet_weights() -> bytes:
    return (resources.files(__name__) / "toy_unet.iodw").read_bytes()
