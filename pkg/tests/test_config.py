import pytest

from seismic.config import RunConfig, dumps_config, load_config, loads_config
from seismic.errors import ConfigError
from seismic.predictor import TWITTER_ALPHA_SCHEDULE


def test_defaults():
    cfg = loads_config("")
    assert cfg == RunConfig()
    assert cfg.min_reshares == 50 and cfg.horizon_days == 14
    assert cfg.eval_times[0] == 300 and cfg.eval_times[-1] == 360 * 60
    assert cfg.kernel.theta == 0.242


def test_full_file(tmp_path):
    text = """
[kernel]
s0_seconds = 200
theta = 0.3

[prediction]
n_star = 80
gamma_n_star = 15
min_reshares = 10
alpha_schedule = [[5, 0.4], [60, 0.9]]

[evaluation]
times_minutes = [10, 30]
quantiles = [50, 90]

[data]
horizon_days = 7
"""
    path = tmp_path / "c.toml"
    path.write_text(text)
    cfg = load_config(path)
    assert cfg.kernel.s0 == 200 and cfg.kernel.theta == 0.3
    assert cfg.prediction.alpha_schedule == ((300.0, 0.4), (3600.0, 0.9))
    assert cfg.eval_times == (600.0, 1800.0)
    assert cfg.min_reshares == 10 and cfg.horizon_seconds == 7 * 86400


def test_dump_round_trip():
    cfg = RunConfig(min_reshares=7, eval_times=(600.0, 1200.0))
    assert loads_config(dumps_config(cfg)) == cfg
    assert loads_config(dumps_config(RunConfig())).prediction.alpha_schedule == \
        tuple((m * 60.0, a) for m, a in TWITTER_ALPHA_SCHEDULE)


@pytest.mark.parametrize("text", [
    "[kernel]\ntheta = -1\n",
    "[kernel]\ns0 = 3\n",
    "[other]\nx = 1\n",
    "[prediction]\nmin_reshares = 2.5\n",
    "[prediction]\ngamma_n_star = -1\n",
    "[prediction]\nalpha_schedule = [[5, 1.5]]\n",
    "[prediction]\nalpha_schedule = [[10, 0.5], [5, 0.5]]\n",
    "[evaluation]\ntimes_minutes = [30, 10]\n",
    "[evaluation]\nquantiles = [120]\n",
    "[data]\nhorizon_days = 0\n",
    "[kernel]\ntheta = \"big\"\n",
    "not toml = = 1",
])
def test_rejections(text):
    with pytest.raises(ConfigError):
        loads_config(text)
