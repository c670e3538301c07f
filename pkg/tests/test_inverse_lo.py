from dataclasses import replace
from fractions import Fraction

import pytest

from rholab.containers import container, frequency_set
from rholab.errors import PreconditionViolated
from rholab.inverse_lo import (
    DESK_PROFILE,
    PAPER_PROFILE,
    build_container,
    canonical_json,
    certificate_json,
    profile_from_dict,
    sample_U,
    sample_Y,
    verify_certificate,
)
from rholab.rng import substream
from rholab.zp_core import PrimeModulus, ZpVector

P101 = PrimeModulus(101)


def constant_vector(c, n):
    return ZpVector((c,) * n)


def test_paper_profile_reproduces_published_constants():
    pr = PAPER_PROFILE
    assert pr.support_floor_coeff == 2**18
    assert pr.m_coeff == 2**12
    assert pr.ell_coeff == Fraction(1, 2**16)
    assert pr.t_coeff == Fraction(1, 2**7)
    assert pr.size_const == 2**16
    assert pr.y_density == Fraction(3, 8)
    assert pr.u_density_coeff == Fraction(1, 2)
    assert pr.rho_floor_coeff == 4
    assert pr.support_threshold_coeff == 2**8


def test_profile_roundtrip_from_dict():
    d = {
        "support_floor_coeff": 32,
        "m_coeff": 13,
        "ell_coeff": "1/65536",
        "t_coeff": "1/8",
        "size_const": 65536,
        "y_density": "3/8",
        "u_density_coeff": "7/8",
        "rho_floor_coeff": 2,
        "support_threshold_coeff": 8,
    }
    pr = profile_from_dict(d)
    assert pr.t_coeff == Fraction(1, 8)
    assert pr.u_density(512, P101) == pytest.approx(7 / 8 * pr.m(P101) / 512)


def test_sample_y_satisfies_acceptance_conditions():
    v = constant_vector(17, 256)
    g = substream(31, "sampley", 0)
    y = sample_Y(v, P101, DESK_PROFILE, g)
    n = len(v)
    assert n <= 4 * len(y) <= 2 * n
    assert 4 * v.restrict(y).support_size >= v.support_size


def test_sample_u_satisfies_acceptance_conditions():
    v = constant_vector(3, 256)
    g = substream(31, "sampleu", 0)
    u = sample_U(v, P101, DESK_PROFILE, g)
    assert len(u) <= DESK_PROFILE.m(P101)
    f = frequency_set(v.restrict(u), P101)
    from rholab.containers import level_set

    assert f <= level_set(v, DESK_PROFILE.t(len(v)), P101).members


def test_paper_profile_samplers_accept_quickly_at_tiny_p():
    # At p = 5 the level-set conditions are automatic, so the per-property
    # failure rate stays below 1/4 and acceptance averages <= 4 attempts.
    from rholab.inverse_lo import sample_U_with_attempts, sample_Y_with_attempts

    p5 = PrimeModulus(5)
    v = constant_vector(2, 512)
    runs = 100
    y_attempts = 0
    u_attempts = 0
    for i in range(runs):
        g = substream(32, "papery", i)
        y, a = sample_Y_with_attempts(v, p5, PAPER_PROFILE, g)
        y_attempts += a
        u, b = sample_U_with_attempts(v, p5, PAPER_PROFILE, g)
        u_attempts += b
        assert len(u) <= PAPER_PROFILE.m(p5)
    assert y_attempts / runs <= 4
    assert u_attempts / runs <= 4


def test_paper_profile_proof_chain_on_accepted_samples():
    # On acceptance the proof's step-by-step size chain holds:
    # |T_ell(v_Y)| <= |T_8ell(v)| <= 2 |F(v_U)| and |B| <= 4p / |F(v_U)|.
    from rholab.containers import level_set
    from rholab.inverse_lo import sample_U_with_attempts, sample_Y_with_attempts

    p5 = PrimeModulus(5)
    v = constant_vector(2, 512)
    for i in range(10):
        g = substream(36, "chain", i)
        y, _ = sample_Y_with_attempts(v, p5, PAPER_PROFILE, g)
        u, _ = sample_U_with_attempts(v, p5, PAPER_PROFILE, g)
        ell = PAPER_PROFILE.ell(v.support_size)
        t_ell_y = level_set(v.restrict(y), ell, p5).size
        t8 = level_set(v, 8 * ell, p5).size
        f = frequency_set(v.restrict(u), p5)
        assert t_ell_y <= t8 <= 2 * len(f)
        b = container(f, p5)
        assert b.size * len(f) <= 4 * p5.p


def test_build_container_certificate_on_constant_vector():
    v = constant_vector(17, 512)
    g = substream(33, "build", 0)
    cert = build_container(v, P101, DESK_PROFILE, g)
    ok, errs = verify_certificate(v, P101, DESK_PROFILE, cert)
    assert ok, errs
    m = cert.measured
    assert 4 * m["outsideCount"] <= 512
    assert m["supportV"] == 512
    # B is the container of the frequency set, recomputed from scratch
    assert cert.b.members == container(frequency_set(v.restrict(cert.u), P101), P101).members
    # the family index pads v_U with zeros up to m; zero entries add no
    # weight, so the padded tuple indexes the same container in the p^m family
    fam = cert.family_index(DESK_PROFILE, v)
    assert len(fam) == DESK_PROFILE.m(P101)
    assert set(fam) <= {0, 17}
    assert frequency_set(ZpVector(fam), P101) == frequency_set(v.restrict(cert.u), P101)


def test_build_container_rejects_low_rho():
    # a generic full-support vector at n = 256 mixes mod 101 and sits at
    # rho ~ 1/p, below the desk floor 2/p
    g = substream(33, "lowrho", 0)
    v = ZpVector(tuple(int(x) for x in g.integers(1, 101, size=256)))
    with pytest.raises(PreconditionViolated):
        build_container(v, P101, DESK_PROFILE, g)


def test_build_container_rejects_small_support():
    v = constant_vector(5, 64)  # support 64 < 32 log 101 ~ 147.7
    g = substream(33, "smallsupp", 0)
    with pytest.raises(PreconditionViolated):
        build_container(v, P101, DESK_PROFILE, g)


def test_verify_certificate_catches_tampering():
    v = constant_vector(9, 512)
    g = substream(34, "tamper", 0)
    cert = build_container(v, P101, DESK_PROFILE, g)
    # inflate B
    tampered = replace(cert, b=replace(cert.b, members=cert.b.members | {50}))
    ok, errs = verify_certificate(v, P101, DESK_PROFILE, tampered)
    assert not ok and errs
    # shrink Y below the window
    tampered = replace(cert, y=frozenset(sorted(cert.y)[: len(v) // 8]))
    ok, errs = verify_certificate(v, P101, DESK_PROFILE, tampered)
    assert not ok and any("sizeY" in e for e in errs)
    # misreport a measured quantity
    bad_measured = dict(cert.measured)
    bad_measured["outsideCount"] = bad_measured["outsideCount"] + 1
    tampered = replace(cert, measured=bad_measured)
    ok, errs = verify_certificate(v, P101, DESK_PROFILE, tampered)
    assert not ok
    # misreport rhoVY
    tampered = replace(cert, rho_vy=replace(cert.rho_vy, count=cert.rho_vy.count + 1))
    ok, errs = verify_certificate(v, P101, DESK_PROFILE, tampered)
    assert not ok and any("rhoVY" in e for e in errs)


def test_build_container_paper_profile_rejects_desk_support():
    # the published support floor is 2^18 log p, far above n = 512
    v = constant_vector(3, 512)
    g = substream(34, "paperfloor", 0)
    with pytest.raises(PreconditionViolated):
        build_container(v, P101, PAPER_PROFILE, g)


def test_sampler_retry_exhausted_on_impossible_profile():
    from dataclasses import replace as dc_replace

    from rholab.errors import RetryExhausted

    # Y density 1/1000 makes |Y| >= n/4 essentially impossible
    hostile = dc_replace(
        DESK_PROFILE, name="hostile", y_density=Fraction(1, 1000), max_attempts=5
    )
    v = constant_vector(4, 256)
    g = substream(34, "hostile", 0)
    with pytest.raises(RetryExhausted):
        sample_Y(v, P101, hostile, g)


def test_certificate_serialization_deterministic():
    v = constant_vector(4, 512)
    a = certificate_json(build_container(v, P101, DESK_PROFILE, substream(35, "ser", 0)))
    b = certificate_json(build_container(v, P101, DESK_PROFILE, substream(35, "ser", 0)))
    assert a == b
    assert '"p":"101"' in a  # integers serialize as decimal strings


def test_canonical_json_sorts_and_stringifies():
    doc = {"b": 2, "a": {"z": [3, 1], "frac": Fraction(1, 3)}}
    assert canonical_json(doc) == '{"a":{"frac":"1/3","z":["3","1"]},"b":"2"}'
