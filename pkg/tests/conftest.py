"""Shared instance builders for the test suite."""

import numpy as np

from risce import admm, channel, sampling


def build_instance(
    seed,
    n_h=4,
    n_v=4,
    n_p=1,
    m=None,
    t=96,
    bits=4,
    snr_linear=np.inf,
    on_grid=False,
):
    """One full training instance; on_grid plants beamspace support directly."""
    rng = np.random.default_rng(seed)
    geometry = channel.RisGeometry(n_h, n_v)
    dictionary = channel.dft_dictionary(geometry)
    n = geometry.n
    if m is None:
        m = n
    if on_grid:
        z = np.zeros(n, dtype=complex)
        support = rng.choice(n, size=n_p, replace=False)
        z[support] = rng.standard_normal(n_p) + 1j * rng.standard_normal(n_p)
        h = dictionary.matrix @ z
        paths = channel.draw_paths(rng, n_p)  # keeps the record populated
        realization = channel.ChannelRealization(h, z, paths)
    else:
        paths = channel.draw_paths(rng, n_p)
        realization = channel.assemble_channel(paths, geometry, dictionary)
    phases = sampling.phase_set(bits)
    codebook = sampling.draw_codebook(rng, m, geometry, phases)
    schedule = sampling.draw_schedule(rng, m, t)
    pilots = sampling.constant_pilots(t)
    obs = sampling.simulate_training(
        realization, codebook, schedule, pilots, snr_linear, rng
    )
    return {
        "rng": rng,
        "geometry": geometry,
        "dictionary": dictionary,
        "realization": realization,
        "phases": phases,
        "codebook": codebook,
        "schedule": schedule,
        "pilots": pilots,
        "obs": obs,
    }


def small_params(tau_r=0.1, tau_z=0.1, **kwargs):
    return admm.AdmmParams(tau_r, tau_z, **kwargs)
