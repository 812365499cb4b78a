import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from edge3c.model import SystemParams, validate_params

BASE = dict(
    lambda_bs=5e-3, tx_power=10.0, noise_power=1e-5, pathloss=4.0,
    nakagami_m=1.0, bandwidth=1e6, compute_rate=1e9, upload_bits=1e5,
    download_bits=1e6, compute_scale_up=100.0, compute_scale_down=100.0,
    latency=0.5, library_size=500, cache_size=50.0, zipf_gamma=0.8,
)


def make_params(**overrides) -> SystemParams:
    cfg = dict(BASE)
    cfg.update(overrides)
    return validate_params(SystemParams(**cfg))
