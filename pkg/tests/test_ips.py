import pytest

from detideals.errors import CertificateInvalid, NoWitness, NotInIdeal, VariableMismatch
from detideals.exact_poly import Poly, VarId
from detideals.ips import (
    AxiomSystem, IPSCertificate, as_wide_matrix, build_rank_instance, compound_certificate,
    det_inversion_refutation, extract_ideal_element, extraction_width, identity_condenser, inversion_system,
    verify_certificate,
)
from detideals.pit import fs_condenser, random_condenser
from detideals.straightening import straighten, symbolic_det

from conftest import xmat


@pytest.mark.parametrize("n", [1, 2, 3])
def test_inversion_refutation(n):
    system = inversion_system(n)
    cert = det_inversion_refutation(n)
    assert verify_certificate(cert, system)
    h = extract_ideal_element(cert, system)
    point = {v: system.witness.get(v, 0) for v in system.variables}
    assert h.evaluate(point) == 1
    assert straighten(as_wide_matrix(h, n), n, 2 * n).min_width() >= n


def test_extracted_element_is_det_times_cofactor():
    system = inversion_system(2)
    h = extract_ideal_element(det_inversion_refutation(2), system)
    ydet = symbolic_det([[Poly.var(VarId("y", (i, j))) for j in (1, 2)] for i in (1, 2)])
    assert h == symbolic_det(xmat(2)) * ydet


def test_compound_certificate_matches_refutation_at_full_rank():
    system = inversion_system(2)
    cert = compound_certificate(system)
    assert verify_certificate(cert, system)
    assert cert.c == det_inversion_refutation(2).c


def test_rank_two_instance_with_generic_condenser():
    system = build_rank_instance(3, 2, random_condenser(3, 2, 6, seed=0))
    cert = compound_certificate(system)
    assert verify_certificate(cert, system)
    h = extract_ideal_element(cert, system, check_width=False)
    assert h.evaluate({v: system.witness.get(v, 0) for v in system.variables}) == 1
    assert extraction_width(h, system) == (True, "rank")


def test_fs_rank_two_instance_has_no_compound_certificate():
    system = build_rank_instance(3, 2, fs_condenser(3, 2))
    with pytest.raises(NotInIdeal):
        compound_certificate(system)


def test_axioms_and_witness():
    system = build_rank_instance(2, 1, fs_condenser(2, 1))
    assert len(system.hard) == 3
    assert len(system.rest) == 4 + 8
    assert system.check_witness()
    for ax in system.hard:
        assert straighten(ax.poly, 2, 2).min_width() >= 1


def test_json_round_trip():
    system = inversion_system(2)
    again = AxiomSystem.from_json(system.to_json())
    assert [a.poly for a in again.axioms] == [a.poly for a in system.axioms]
    assert again.witness == system.witness
    cert = IPSCertificate.from_json(det_inversion_refutation(2).to_json())
    assert verify_certificate(cert, again)


def test_rejections():
    system = inversion_system(2)
    bogus = IPSCertificate(Poly.var(VarId("z", (1,))))
    assert not verify_certificate(bogus, system)
    with pytest.raises(CertificateInvalid):
        extract_ideal_element(bogus, system)
    with pytest.raises(VariableMismatch):
        verify_certificate(IPSCertificate(Poly.var(VarId("u", (9, 9)))), system)
    blind = AxiomSystem(system.axioms, system.variables, None, 2, 2)
    with pytest.raises(NoWitness):
        extract_ideal_element(det_inversion_refutation(2), blind)


def test_identity_condenser():
    c = identity_condenser(3)
    assert c.matrices == [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]
