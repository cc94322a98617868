import random

import numpy as np
import pytest

from scrapbook.image import RasterImage


def random_image(rng: random.Random, max_side: int = 64, opaque: bool = False) -> RasterImage:
    w = rng.randint(1, max_side)
    h = rng.randint(1, max_side)
    data = bytearray(rng.randrange(256) for _ in range(w * h * 4))
    if opaque:
        data[3::4] = bytes([255]) * (w * h)
    return RasterImage(w, h, data)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def images_equal(a: RasterImage, b: RasterImage) -> bool:
    return a == b


def array_of(img: RasterImage) -> np.ndarray:
    return img.array.copy()
