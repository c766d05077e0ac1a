from __future__ import annotations

import random

import pytest

from coxglue import pairing as pg
from coxglue import tables
from coxglue.lorentz import identity, mat_mul


def test_codec_matches_embedded_table():
    for ch, row in tables.digit_signs().items():
        k = pg.decode_digit(ch)
        assert k.signs == row[:6]
        assert pg.encode_digit(k) == ch


def test_digit_examples():
    assert pg.decode_digit("M").signs == (1, -1, -1, 1, -1, 1)
    assert pg.decode_digit("0").signs == (1, 1, 1, 1, 1, 1)
    assert pg.decode_digit("$").signs == (-1, -1, -1, -1, -1, -1)
    with pytest.raises(pg.PairingError):
        pg.decode_digit("%")
    with pytest.raises(pg.PairingError):
        pg.decode_digit("Z", dim=5)  # value 35 needs six signs


def test_code_validation():
    with pytest.raises(pg.PairingError):
        pg.PairingCode(6, "MVS")
    with pytest.raises(pg.PairingError):
        pg.PairingCode(6, "!" * 21)
    with pytest.raises(pg.PairingError):
        pg.PairingCode(4, "0000")
    assert str(pg.PairingCode(5, "EKB98LLG6R2")) == "EKB98LLG6R2"


def test_decode_published_code(q6):
    rec = tables.manifold_record(1)
    qsp = pg.decode_q_code(rec.code, q6)
    # the first wall pairs to the wall whose normal has the second sign
    # flipped: index 2 in the standard order
    assert qsp.partner[0] == 2
    assert qsp.k_elements[0] == pg.decode_digit("M")
    for s in q6.sides:
        i, j = s.index, qsp.partner[s.index]
        assert qsp.partner[j] == i
        assert mat_mul(qsp.transforms[i], qsp.transforms[j]) == identity(7)


def test_decode_identity_code(q6):
    qsp = pg.decode_q_code("0" * 21, q6)
    assert all(qsp.partner[i] == i for i in range(252))


def test_parse_errors():
    good = tables.pairing_array_text(1)
    pg.parse_8p_pairing(good)
    with pytest.raises(pg.PairingError):
        pg.parse_8p_pairing(good.replace("2^0", "9^3", 1))
    with pytest.raises(pg.PairingError):
        pg.parse_8p_pairing(good.replace("2^0", "2^x", 1))
    with pytest.raises(pg.PairingError):
        pg.parse_8p_pairing(good + "1^0\n")
    # a consistent swap of tokens breaks the involution law
    with pytest.raises(pg.PairingError):
        pg.parse_8p_pairing(good.replace("2^0 1^7", "1^7 2^0", 1))


def test_parse_accepts_grouped_tokens():
    text = tables.pairing_array_text(1)
    grouped = "\n".join(
        " ".join("".join(line.split()[i:i + 3]) for i in range(0, 27, 3))
        for line in text.splitlines())
    assert pg.parse_8p_pairing(grouped).entries == \
        pg.parse_8p_pairing(text).entries


def test_involution_example_entries():
    arr = pg.published_pairing(1)
    assert arr.entry(0, 0) == (1, 0)       # first token reads 2^0
    assert arr.entry(0, 1) == (0, 7)
    assert arr.entry(0, 13) == (0, 1)      # forced by the involution law
    for mid in range(1, 10):
        pg.published_pairing(mid).validate_involution()


def test_develop_reproduces_all_published_codes():
    for mid in range(1, 10):
        dev = pg.develop(pg.published_pairing(mid))
        assert dev.code.digits == tables.manifold_record(mid).code
        assert len(dev.placements) == 64


def test_develop_conflict_on_corrupted_array():
    rng = random.Random(99)
    arr = pg.published_pairing(1)
    seen_conflict = 0
    for _ in range(5):
        mut = pg.mutated_pairing(arr, rng)
        try:
            dev = pg.develop(mut)
        except pg.DevelopmentConflict:
            seen_conflict += 1
    assert seen_conflict >= 1


def test_restriction():
    assert pg.restrict_code(tables.manifold_record(1).code).digits == \
        "EKB98LLG6R2"
    assert pg.restrict_code(tables.manifold_record(2).code).digits == \
        "EKB98LLG6R2"
    restricted = {pg.restrict_code(tables.manifold_record(m).code).digits
                  for m in range(3, 10)}
    assert restricted == {"2B7JB47JG81"}


def test_restriction_invariance_check(q6):
    qsp = pg.decode_q_code(tables.manifold_record(1).code, q6)
    pg.restrict_check(qsp)
    # tamper with a cross-section wall transform: swap coordinate one out
    swap = tuple(tuple(1 if (i, j) in ((0, 2), (2, 0)) else
                       (1 if i == j and i not in (0, 2) else 0)
                       for j in range(7)) for i in range(7))
    bad_idx = next(s.index for s in q6.sides if s.normal[0] == 0)
    transforms = list(qsp.transforms)
    transforms[bad_idx] = mat_mul(swap, transforms[bad_idx])
    tampered = pg.QSidePairing(q6, qsp.code, qsp.partner,
                               qsp.k_elements, tuple(transforms))
    with pytest.raises(pg.CrossSectionError):
        pg.restrict_check(tampered)


def test_orientability():
    for rec in tables.manifold_records():
        assert pg.orientability_of_code(rec.code) == rec.orientable
    assert pg.orientability_of_code("0" * 21) is False


def test_mutations_stay_involutive():
    rng = random.Random(1)
    arr = pg.published_pairing(4)
    for _ in range(10):
        mut = pg.mutated_pairing(arr, rng)
        mut.validate_involution()
        assert mut.entries != arr.entries


def test_relabeled_pairing_is_involutive():
    arr = pg.published_pairing(1)
    perm = [3, 0, 1, 2, 5, 4, 7, 6]
    re = arr.relabeled(perm)
    re.validate_involution()
    assert re.entries != arr.entries


def test_search_budget_zero():
    res = pg.search_pairings(None, node_budget=0)
    assert res.solutions == ()
    assert res.budget_exhausted
    assert not res.complete


def test_search_infeasible_constraints():
    # entry and its forced partner disagree
    fixed = {(0, 0): (1, 0), (1, 0): (2, 0)}
    res = pg.search_pairings(fixed, node_budget=100)
    assert res.infeasible
    assert res.solutions == ()


def test_decode_random_codes_validate(q6):
    rng = random.Random(77)
    for _ in range(10):
        code = "".join(pg.ALPHABET[rng.randrange(64)] for _ in range(21))
        qsp = pg.decode_q_code(code, q6)  # validates involution internally
        groups = {}
        for s in q6.sides:
            groups.setdefault(s.group, set()).add(qsp.k_elements[s.index])
        assert all(len(ks) == 1 for ks in groups.values())
