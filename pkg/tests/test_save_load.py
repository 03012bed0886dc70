""" Tests for saving and loading computed grids as .h1rec records """

import pytest
import numpy as np

@pytest.fixture(scope = "module")
def test_saving(tmp_path_factory):
    from h1frames.curves.factory import sampled_signature
    from h1frames.surfaces.factory import sampled_coefficients

    filedir = tmp_path_factory.mktemp("record_temp")

    sig = sampled_signature(
        lambda s: np.ones_like(s), lambda s: np.full_like(s, 0.5), 2.0, 41,
        name = "test_signature",
    )
    sig.info_string = "test info string"
    sig.save(filedir)

    coeffs = sampled_coefficients(
        np.linspace(-1, 1, 21), np.linspace(0, 2, 11), name = "test_helicoid",
        b = lambda U, V: U, c = lambda U, V: 1.0 + U**2, m = 1.0,
    )
    coeffs.save(filedir / "nested" / "helicoid.h1rec")

    return filedir

def test_load_signature(test_saving):
    from h1frames import NoRecordError
    from h1frames.curves import CurveSignature

    load_path = test_saving
    # fails if it did not correctly save
    possible_file = next(load_path.glob(f"*.{CurveSignature.FILE_EXTENSION}"))
    with pytest.raises(NoRecordError):
        CurveSignature.load(
            possible_file,
            filter_condition = lambda x : x.name == "not_test_signature"
        )

    sig = CurveSignature.load(possible_file)

    assert isinstance(sig, CurveSignature)
    assert sig.name == "test_signature"
    assert sig.info_string == "test info string"
    assert len(sig) == 41
    assert np.allclose(sig.s, np.linspace(0.0, 2.0, 41), rtol = 0, atol = 1e-15)
    assert np.all(sig.k == 1.0)
    assert np.all(sig.tau == 0.5)

def test_load_coefficients(test_saving):
    from h1frames.surfaces import SurfaceCoefficients
    from h1frames.surfaces.factory import helicoid_coefficients
    from h1frames.record import GridRecord

    # the class comes from the file, not from the caller
    coeffs = GridRecord.load(test_saving / "nested" / "helicoid.h1rec")
    expected = helicoid_coefficients(np.linspace(-1, 1, 21), np.linspace(0, 2, 11))

    assert isinstance(coeffs, SurfaceCoefficients)
    assert coeffs.name == "test_helicoid"
    assert coeffs.info_string is None
    assert coeffs.shape == (21, 11)
    assert coeffs.max_difference(expected) == 0.0
    assert np.isclose(coeffs.du, 0.1)

def test_load_records(test_saving):
    from h1frames import load_records

    records = load_records(test_saving)
    assert len(records) == 2

    only_nested = load_records(test_saving, pattern = "nested")
    assert len(only_nested) == 1
    assert only_nested[0].name == "test_helicoid"
    assert load_records(test_saving, pattern = "no_such_directory") == []
    # sorted by path: CurveSignature_test_signature.h1rec before nested/
    assert [record.name for record in records] == ["test_signature", "test_helicoid"]
