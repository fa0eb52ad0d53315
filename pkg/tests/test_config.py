import pytest

from evdeblur.config import NetConfig, load_config, save_config


def test_defaults_valid():
    cfg = NetConfig()
    assert cfg.n_frames == 5
    assert cfg.channels_at(2) == 4 * cfg.base_channels


def test_validation():
    with pytest.raises(ValueError, match="divide"):
        NetConfig(voxel_bins=5, fusion_iters=2)
    with pytest.raises(ValueError, match="frame_radius"):
        NetConfig(frame_radius=0)
    with pytest.raises(ValueError, match="scales"):
        NetConfig(scales=4)
    with pytest.raises(ValueError, match="odd"):
        NetConfig(dynamic_kernel=4)
    with pytest.raises(ValueError, match="even"):
        NetConfig(base_channels=5)


def test_file_round_trip(tmp_path):
    cfg = NetConfig(frame_radius=3, voxel_bins=8, fusion_iters=2,
                    base_channels=4, enable_intra_fusion=False)
    path = tmp_path / "net.cfg"
    save_config(cfg, path)
    assert load_config(path) == cfg


def test_comments_and_spacing(tmp_path):
    path = tmp_path / "net.cfg"
    path.write_text("# toy setup\nframe_radius = 1\nvoxel_bins=4\n"
                    "fusion_iters = 2  # recurrent steps\nenable_align = false\n")
    cfg = load_config(path)
    assert cfg.frame_radius == 1
    assert cfg.voxel_bins == 4
    assert cfg.enable_align is False


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "net.cfg"
    path.write_text("frame_radiuss = 1\n")
    with pytest.raises(ValueError, match="unknown config key"):
        load_config(path)


def test_bad_boolean_rejected(tmp_path):
    path = tmp_path / "net.cfg"
    path.write_text("enable_align = maybe\n")
    with pytest.raises(ValueError, match="boolean"):
        load_config(path)
