import pytest

from relayasym.channels import FadingModel, HopConfig
from relayasym.mellin import NetworkConfig

F = FadingModel


def make_network(models, rhos=None, gamma_t=1.0) -> NetworkConfig:
    if rhos is None:
        rhos = [1.0] * len(models)
    hops = tuple(HopConfig(m, r) for m, r in zip(models, rhos))
    return NetworkConfig(hops=hops, gamma_t=gamma_t)


def rayleigh_chain(n, gamma_t=1.0) -> NetworkConfig:
    return make_network([F.nakagami(1.0) for _ in range(n)], gamma_t=gamma_t)


# The seven reference configurations (theta = rho = 1, gamma_t = 0 dB).
REFERENCE_CONFIGS = {
    "nak3": make_network([F.nakagami(2.2), F.nakagami(1.8), F.nakagami(1.8)]),
    "wei4": make_network([F.weibull(2.2), F.weibull(1.8), F.weibull(1.8), F.weibull(1.8)]),
    "ric3": make_network([F.rician(1.0), F.rician(3.0), F.rician(5.0)]),
    "ric4": make_network([F.rician(1.0), F.rician(3.0), F.rician(5.0), F.rician(0.0)]),
    "hoyt3": make_network([F.hoyt(0.75), F.hoyt(0.5), F.hoyt(1.0 / 3.0)]),
    "hoyt4": make_network([F.hoyt(0.75), F.hoyt(0.5), F.hoyt(1.0 / 3.0), F.hoyt(0.25)]),
    "inhom": make_network([F.weibull(2.0), F.rician(1.0), F.hoyt(0.5)]),
}


@pytest.fixture(scope="session")
def reference_configs():
    return REFERENCE_CONFIGS
