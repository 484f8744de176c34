import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathsim.angles import PiMultiple, format_angle, parse_angle, unit_phase
from pathsim.optics import beam_splitter_matrix
from pathsim.state import (
    JointState,
    Layer,
    apply_phase,
    apply_single_side_unitary,
    canonical_phase,
    equal_up_to_global_phase,
    joint_probabilities,
    make_entangled_source,
    marginal,
    mode,
    overlap,
)

import oracles

S = 1 / math.sqrt(2)
angles = st.floats(-10, 10, allow_nan=False)


def stage1(phi):
    s = apply_phase(make_entangled_source(), mode("b'"), phi)
    s = apply_single_side_unitary(s, "L", beam_splitter_matrix(), Layer.SOURCE, Layer.STAGE1)
    return apply_single_side_unitary(s, "R", beam_splitter_matrix(), Layer.SOURCE, Layer.STAGE1)


def random_state(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    v /= np.linalg.norm(v)
    pairs = [(mode(l), mode(r)) for l in "ab" for r in ("a'", "b'")]
    return JointState(dict(zip(pairs, v)))


class TestAngles:
    @pytest.mark.parametrize(
        "text, coeff",
        [("pi", 1), ("pi/2", 0.5), ("-pi/4", -0.25), ("3pi/4", 0.75), ("2*pi", 2), ("0", 0)],
    )
    def test_pi_literals(self, text, coeff):
        a = parse_angle(text)
        assert isinstance(a, PiMultiple)
        assert float(a.coeff) == coeff

    def test_decimal(self):
        assert parse_angle("0.123") == 0.123
        assert format_angle(0.123) == "0.123"

    @pytest.mark.parametrize("bad", ["pie", "pi/0", "nan", "inf", "1.2.3", ""])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_angle(bad)

    def test_exact_quarter_turns(self):
        assert unit_phase(PiMultiple(1)) == -1
        assert unit_phase(PiMultiple(0.5)) == 1j
        assert unit_phase(PiMultiple(-0.5)) == -1j
        assert unit_phase(PiMultiple(2)) == 1

    @given(st.fractions(max_denominator=12).filter(lambda f: abs(f) < 50))
    def test_format_round_trip(self, c):
        assert parse_angle(format_angle(PiMultiple(c))) == PiMultiple(c)


class TestSource:
    def test_amplitudes(self):
        s = make_entangled_source()
        assert dict(s.amplitudes) == {(mode("a"), mode("a'")): S, (mode("b"), mode("b'")): S}
        assert s.norm_squared() == pytest.approx(1.0, abs=1e-15)
        assert overlap(s, s) == pytest.approx(1.0, abs=1e-15)

    def test_probabilities_and_marginal(self):
        s = make_entangled_source()
        assert list(joint_probabilities(s).values()) == pytest.approx([0.5, 0.5])
        assert dict(marginal(s, "R")) == pytest.approx({mode("a'"): 0.5, mode("b'"): 0.5})

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="normalized"):
            JointState({(mode("a"), mode("a'")): 0.5})

    def test_rejects_mixed_layers_on_one_side(self):
        with pytest.raises(ValueError, match="layers"):
            JointState({(mode("a"), mode("a'")): S, (mode("c"), mode("b'")): S})

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            JointState({(mode("a"), mode("a'")): complex("nan")})


class TestPhase:
    def test_matches_printed_form(self):
        phi = 0.7
        s = apply_phase(make_entangled_source(), mode("b'"), phi)
        assert s["a", "a'"] == pytest.approx(S, abs=1e-15)
        assert s["b", "b'"] == pytest.approx(S * cmath.exp(1j * phi), abs=1e-15)

    def test_zero_angle_is_identity(self):
        s = make_entangled_source()
        assert dict(apply_phase(s, mode("b'"), 0.0).amplitudes) == dict(s.amplitudes)

    @given(angles, angles)
    def test_additivity(self, a, b):
        s = make_entangled_source()
        twice = apply_phase(apply_phase(s, mode("b'"), a), mode("b'"), b)
        once = apply_phase(s, mode("b'"), a + b)
        for k in once:
            assert abs(twice[k] - once[k]) < 1e-12

    def test_layer_mismatch(self):
        with pytest.raises(ValueError, match="layer"):
            apply_phase(make_entangled_source(), mode("c'"), 1.0)


class TestUnitary:
    def test_hand_computed_amplitudes(self):
        s = apply_single_side_unitary(
            make_entangled_source(), "L", beam_splitter_matrix(), Layer.SOURCE, Layer.STAGE1
        )
        # a -> (c + i d)/sqrt2, b -> (i c + d)/sqrt2, each times 1/sqrt2
        expected = {("c", "a'"): 0.5, ("d", "a'"): 0.5j, ("c", "b'"): 0.5j, ("d", "b'"): 0.5}
        assert oracles.max_diff(oracles.amplitudes_by_letter(s), {
            (l, r[0]): z for (l, r), z in expected.items()
        }) < 1e-15
        assert s.layer("L") is Layer.STAGE1 and s.layer("R") is Layer.SOURCE

    def test_identity(self):
        s = make_entangled_source()
        out = apply_single_side_unitary(s, "R", np.eye(2), Layer.SOURCE, Layer.SOURCE)
        # the output lists zero amplitudes explicitly
        assert all(out[k] == s[k] for k in set(out) | set(s))

    def test_inverse_restores(self):
        rng = np.random.default_rng(3)
        u = beam_splitter_matrix()
        for _ in range(20):
            s = random_state(rng)
            out = apply_single_side_unitary(s, "L", u, Layer.SOURCE, Layer.STAGE1)
            back = apply_single_side_unitary(out, "L", u.conj().T, Layer.STAGE1, Layer.SOURCE)
            assert all(abs(back[k] - s[k]) < 1e-12 for k in s)
            assert abs(out.norm_squared() - 1) < 1e-12

    def test_non_unitary_rejected_with_deviation(self):
        # |a> -> (|c> + |d>)/sqrt2, |b> -> (i|c> + |d>)/sqrt2, taken literally
        literal = np.array([[1, 1j], [1, 1]]) / math.sqrt(2)
        with pytest.raises(ValueError, match=r"not unitary: max \|U U\^dagger - I\| = 0\.707"):
            apply_single_side_unitary(make_entangled_source(), "L", literal, Layer.SOURCE, Layer.STAGE1)

    def test_layer_mismatch(self):
        with pytest.raises(ValueError, match="expects side L in layer STAGE1"):
            apply_single_side_unitary(
                make_entangled_source(), "L", np.eye(2), Layer.STAGE1, Layer.SOURCE
            )


class TestProbabilities:
    def test_phi_zero(self):
        p = joint_probabilities(stage1(0.0))
        assert p[(mode("d"), mode("c'"))] == pytest.approx(0.5, abs=1e-12)
        assert p[(mode("c"), mode("d'"))] == pytest.approx(0.5, abs=1e-12)
        assert p[(mode("c"), mode("c'"))] == pytest.approx(0.0, abs=1e-12)
        assert p[(mode("d"), mode("d'"))] == pytest.approx(0.0, abs=1e-12)

    def test_phi_pi(self):
        p = joint_probabilities(stage1(math.pi))
        assert p[(mode("c"), mode("c'"))] == pytest.approx(0.5, abs=1e-12)
        assert p[(mode("d"), mode("d'"))] == pytest.approx(0.5, abs=1e-12)
        assert p[(mode("d"), mode("c'"))] == pytest.approx(0.0, abs=1e-12)

    @given(angles)
    def test_marginal_is_flat(self, phi):
        m = marginal(stage1(phi), "L")
        assert abs(m[mode("c")] - 0.5) < 1e-9 and abs(m[mode("d")] - 0.5) < 1e-9


class TestOverlap:
    def test_orthogonal_after_pi_shift(self):
        s = make_entangled_source()
        assert abs(overlap(s, apply_phase(s, mode("b'"), PiMultiple(1)))) < 1e-15

    def test_global_phase(self):
        s = stage1(0.4)
        for g in (-1, 1j, cmath.exp(0.3j)):
            t = JointState({k: g * z for k, z in s.amplitudes.items()})
            assert abs(abs(overlap(s, t)) - 1) < 1e-12
            assert equal_up_to_global_phase(s, t)

    def test_distinct_states(self):
        assert not equal_up_to_global_phase(stage1(0.0), stage1(math.pi))

    def test_layer_mismatch(self):
        with pytest.raises(ValueError, match="layer mismatch"):
            overlap(make_entangled_source(), stage1(0.0))

    @settings(max_examples=50)
    @given(st.integers(0, 2**32 - 1))
    def test_conjugate_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_state(rng), random_state(rng)
        assert abs(overlap(a, b) - overlap(b, a).conjugate()) < 1e-12
        assert abs(overlap(a, b)) <= 1 + 1e-12

    def test_canonical_phase(self):
        s = JointState({k: 1j * z for k, z in stage1(0.4).amplitudes.items()})
        c = canonical_phase(s)
        first = next(iter(c.amplitudes.values()))
        assert first.imag == pytest.approx(0, abs=1e-15) and first.real > 0
        assert equal_up_to_global_phase(c, s)
