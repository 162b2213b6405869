import numpy as np

from phibvp import (CATALOG_DESCRIPTORS, Grid, corpus, integral,
                    random_forcing)


class TestRandomForcing:
    def test_nonnegative_with_positive_mass(self):
        rng = np.random.default_rng(5)
        grid = Grid.uniform(0.0, 1.0, 257)
        for _ in range(25):
            h = random_forcing(rng, grid)
            assert h.grid == grid
            assert np.all(h.values >= 0.0)
            assert integral(h) > 0.0

    def test_amplitudes_stay_bounded(self):
        rng = np.random.default_rng(6)
        grid = Grid.uniform(0.0, 1.0, 257)
        for _ in range(25):
            h = random_forcing(rng, grid)
            # At most three unit-shape bumps of amplitude three plus a
            # floor of one half.
            assert float(np.max(h.values)) <= 9.5


class TestCorpus:
    def test_deterministic_by_seed(self):
        first = corpus(123, 6)
        second = corpus(123, 6)
        assert len(first) == len(second) == 6
        for (d1, _, h1), (d2, _, h2) in zip(first, second):
            assert d1 == d2
            assert np.array_equal(h1.values, h2.values)

    def test_seeds_differ(self):
        h1 = corpus(1, 1)[0][2]
        h2 = corpus(2, 1)[0][2]
        assert not np.array_equal(h1.values, h2.values)

    def test_descriptors_come_from_the_catalog(self):
        for descriptor, phi, h in corpus(9, 12, grid_size=65):
            assert descriptor in CATALOG_DESCRIPTORS
            assert phi.label == descriptor
            assert h.grid.count == 65
