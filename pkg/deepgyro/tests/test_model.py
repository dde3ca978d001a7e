import pytest
import torch

from deepgyro import NetConfig, build_network, parameter_count
from deepgyro.errors import InvalidConfigError

# frozen after the first build; architecture changes must be deliberate
GOLDEN_PARAM_COUNTS = {3: 7_760_172, 5: 7_760_748}


class TestShapes:
    def test_blind_preserves_128(self):
        net = build_network(NetConfig(in_channels=3))
        out = net(torch.zeros(1, 3, 128, 128))
        assert tuple(out.shape) == (1, 3, 128, 128)

    def test_gyro_arbitrary_multiple_of_stride(self):
        net = build_network(NetConfig(in_channels=5))
        out = net(torch.zeros(2, 5, 96, 160))
        assert tuple(out.shape) == (2, 3, 96, 160)

    @pytest.mark.parametrize("size", [(64, 64), (32, 64)])
    def test_more_sizes(self, size):
        net = build_network(NetConfig(in_channels=5, depth=3, base_channels=8))
        out = net(torch.zeros(1, 5, *size))
        assert tuple(out.shape) == (1, 3, *size)


class TestConfig:
    @pytest.mark.parametrize("ch", [3, 5])
    def test_golden_parameter_count(self, ch):
        net = build_network(NetConfig(in_channels=ch))
        assert parameter_count(net) == GOLDEN_PARAM_COUNTS[ch]

    def test_invalid_configs(self):
        with pytest.raises(InvalidConfigError):
            NetConfig(in_channels=4)
        with pytest.raises(InvalidConfigError):
            NetConfig(depth=0)
        with pytest.raises(InvalidConfigError):
            NetConfig(loss="huber")

    def test_config_round_trips_through_dict(self):
        cfg = NetConfig(in_channels=3, depth=2, base_channels=8, loss="L2")
        assert NetConfig(**cfg.to_dict()) == cfg


class TestFieldSensitivity:
    def test_permuting_uv_changes_output(self):
        torch.manual_seed(0)
        net = build_network(NetConfig(in_channels=5, depth=2, base_channels=8))
        x = torch.rand(1, 5, 64, 64)
        swapped = x.clone()
        swapped[:, 3], swapped[:, 4] = x[:, 4], x[:, 3]
        with torch.no_grad():
            delta = (net(x) - net(swapped)).abs().max()
        assert float(delta) > 0.0
