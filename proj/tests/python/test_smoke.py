"""Smoke tests for the bi3d extension module."""

import math

import numpy as np
import pytest

bi3d = pytest.importorskip("bi3d")


@pytest.fixture(scope="module")
def scene():
    spec = bi3d.SceneSpec()
    spec.width = 96
    spec.height = 64
    spec.background_disparity = 4
    layer = bi3d.SceneLayer()
    layer.x0, layer.y0, layer.width, layer.height = 24, 16, 48, 32
    layer.disparity = 11
    layer.texture_seed = 1
    spec.layers = [layer]
    spec.seed = 7
    return bi3d.render_pair(spec)


def test_numpy_round_trip():
    arr = np.random.default_rng(0).random((8, 13), dtype=np.float32)
    img = bi3d.GrayImage(arr)
    assert img.width == 13 and img.height == 8
    np.testing.assert_array_equal(img.numpy(), arr)


def test_render_shapes_and_gt_soundness(scene):
    left = scene.pair.left.numpy()
    right = scene.pair.right.numpy()
    gt = scene.gt.numpy()
    occ = scene.occlusion.numpy()
    assert left.shape == right.shape == gt.shape == occ.shape == (64, 96)
    ys, xs = np.nonzero(occ == 0)
    src = xs - gt[ys, xs].astype(int)
    np.testing.assert_array_equal(right[ys, src], left[ys, xs])


def test_warp_identity(scene):
    warped = bi3d.warp_right(scene.pair.right, 0.0)
    np.testing.assert_array_equal(warped.image.numpy(), scene.pair.right.numpy())
    assert warped.validity().all()


def test_oracle_full_depth_within_half_spacing(scene):
    planes = bi3d.uniform_schedule(0.0, 16.0, 17)
    vol = bi3d.build_oracle_volume(scene.gt, planes)
    est = bi3d.auc_disparity(vol).numpy()
    gt = scene.gt.numpy()
    assert np.nanmax(np.abs(est - gt)) <= 0.5 + 1e-6


def test_quantized_matches_direct_binning(scene):
    vol = bi3d.build_oracle_volume(scene.gt, bi3d.levels_schedule(4, 16.0))
    quant = bi3d.quantized_disparity(vol, 16.0)
    edges = np.asarray(quant.edges)
    gt = scene.gt.numpy()
    direct = np.clip(np.searchsorted(edges[1:-1], gt, side="left"), 0, 3)
    np.testing.assert_array_equal(quant.bins.numpy(), direct.astype(np.uint16))


def test_census_classifier_votes_by_side(scene):
    cfg = bi3d.ClassifierConfig.defaults_for(bi3d.CostKind.CENSUS)
    below = bi3d.classify_plane(scene.pair, 2.0, cfg)
    above = bi3d.classify_plane(scene.pair, 14.0, cfg)
    m_below = below.confidence()[below.validity() > 0].mean()
    m_above = above.confidence()[above.validity() > 0].mean()
    assert m_below > 0.5 > m_above


def test_selective_labels(scene):
    vol = bi3d.build_oracle_volume(scene.gt, bi3d.uniform_schedule(6.0, 16.0, 11))
    sel = bi3d.selective_disparity(vol)
    labels = sel.labels.numpy()
    gt = scene.gt.numpy()
    assert (labels[gt <= 6.0] == 0).all()  # BEHIND
    assert (labels[(gt > 6.0) & (gt <= 16.0)] == 2).all()  # IN_RANGE


def test_metrics(scene):
    gt = scene.gt
    assert bi3d.epe(gt, gt) == 0.0
    shifted = bi3d.DisparityMap(gt.numpy() + 1.0)
    assert bi3d.epe(shifted, gt) == pytest.approx(1.0)
    assert bi3d.bad_pixel_rate(shifted, gt, threshold=0.5) == 1.0
    labels = bi3d.LabelMap(np.zeros((4, 4), dtype=np.uint16))
    assert bi3d.miou(labels, labels, 1).miou == 1.0


def test_file_io_round_trip(tmp_path, scene):
    pgm = tmp_path / "left.pgm"
    bi3d.write_pgm(scene.pair.left, pgm)
    back = bi3d.read_pgm(pgm)
    # continuous intensities quantize to 8 bits on write; a second pass is exact
    assert np.abs(back.numpy() - scene.pair.left.numpy()).max() <= 0.5 / 255.0
    again = tmp_path / "again.pgm"
    bi3d.write_pgm(back, again)
    np.testing.assert_array_equal(bi3d.read_pgm(again).numpy(), back.numpy())

    pfm = tmp_path / "gt.pfm"
    bi3d.write_pfm(scene.gt, pfm)
    np.testing.assert_array_equal(bi3d.read_pfm(pfm).numpy(), scene.gt.numpy())

    ppm = tmp_path / "gt.ppm"
    bi3d.colorize(scene.gt, 0.0, 16.0, ppm)
    assert ppm.stat().st_size > 0


def test_adaptive_step(scene):
    cfg = bi3d.AdaptiveConfig()
    cfg.range_lo, cfg.range_hi, cfg.fence = 13.0, 20.0, 8.0
    cfg.planes_per_range = 8
    state = bi3d.AdaptiveState()
    step = bi3d.adaptive_step_oracle(state, scene.gt, cfg)
    # the layer at disparity 11 is in front of the fence at 8
    assert step.fence_fraction >= 0.2
    assert step.state.extended


def test_errors_surface_as_exceptions():
    with pytest.raises(Exception, match="strictly increasing"):
        bi3d.PlaneSchedule([3.0, 1.0])
    with pytest.raises(Exception, match="d_min"):
        bi3d.uniform_schedule(10.0, 5.0, 3)
