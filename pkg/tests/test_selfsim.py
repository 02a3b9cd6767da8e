from fractions import Fraction

import pytest

from flipiet.errors import EmptyCylinder, NoFixedSeed
from flipiet.iet import IetSpec
from flipiet.quintic import (MATRIX, REFERENCE_ITINERARIES, bundled_iet,
                             bundled_theta1)
from flipiet.selfsim import (Substitution, associated_matrix, cylinder_locate,
                             fixed_word, induce, occurrence_addresses,
                             self_similarity_check, stationary_window,
                             substitution_from)


@pytest.fixture(scope="module")
def E():
    return bundled_iet()


@pytest.fixture(scope="module")
def J(E):
    th1 = bundled_theta1()
    one = E.lengths[0].field.rational(1, th1.embedding)
    return (E.origin, one / th1)


def test_induce_full_domain_is_identity_return(E):
    ind = induce(E, (E.x[0], E.x[-1]))
    assert ind.return_times == (1,) * 5
    assert ind.sub_iet.sp == E.sp
    assert ind.sub_iet.lengths == E.lengths


def test_induce_rotation_half():
    E2 = IetSpec((Fraction(1, 2), Fraction(1, 2)), (2, 1))
    ind = induce(E2, (Fraction(0), Fraction(1, 2)))
    assert len(ind.return_times) == 1
    assert ind.return_times == (2,)
    assert ind.itineraries.words == ((1, 2),)


def test_induce_contracted_copy(E, J):
    th1 = bundled_theta1()
    ind = induce(E, J)
    assert ind.sub_iet.sp.entries == (-5, -3, 2, 1, -4)
    for i in range(5):
        assert ind.sub_iet.lengths[i] * th1 == E.lengths[i]


def test_induced_pieces_tile_J(E, J):
    ind = induce(E, J)
    total = J[1] - J[0]
    s = ind.sub_iet.lengths[0]
    for v in ind.sub_iet.lengths[1:]:
        s = s + v
    assert s == total


def test_associated_matrix_and_words(E, J):
    m, its = associated_matrix(E, J)
    assert m == MATRIX
    for i, n, w in REFERENCE_ITINERARIES:
        assert its.exponents[i - 1] == n
        assert its.words[i - 1] == w


def test_kac_identity(E, J):
    # return times weighted by piece length fill the whole domain exactly
    ind = induce(E, J)
    acc = None
    for t, (lo, hi) in zip(ind.return_times, ind.parts):
        term = (hi - lo) * t
        acc = term if acc is None else acc + term
    assert acc == E.total_length


def test_self_similarity_certificate(E, J):
    th1 = bundled_theta1()
    ss = self_similarity_check(E, J)
    assert ss.ok
    assert ss.scale == th1


def test_self_similarity_counterexample(E):
    half = E.lengths[0].field.rational(Fraction(1, 2), bundled_theta1().embedding)
    res = self_similarity_check(E, (E.origin, half))
    assert not res.ok


def test_self_similarity_identity_perm():
    # the identity permutation is self-similar only on the full domain: any
    # proper window cuts it into a different number of pieces
    E2 = IetSpec((Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)), (1, 2, 3))
    res = self_similarity_check(E2, (Fraction(0), Fraction(1)))
    assert res.ok and res.scale == 1
    res2 = self_similarity_check(E2, (Fraction(0), Fraction(1, 2)))
    assert not res2.ok


def test_associated_matrix_full_domain(E):
    m, its = associated_matrix(E, (E.x[0], E.x[-1]))
    # each return word is the single symbol of its own piece
    assert its.words == ((1,), (2,), (3,), (4,), (5,))
    assert m == tuple(tuple(int(i == j) for j in range(5)) for i in range(5))


def test_substitution_and_abelianization(E, J):
    _, its = associated_matrix(E, J)
    sigma = substitution_from(its)
    assert sigma.images[1] == (1, 5, 1, 4)
    assert sigma.images[5] == (1, 5, 2, 1, 5, 4)
    assert sigma.abelianization() == MATRIX


def test_fixed_words(E, J):
    _, its = associated_matrix(E, J)
    sigma = substitution_from(its)
    word, seed = fixed_word(sigma, "forward", 4)
    assert word == (1, 5, 1, 4) and seed == 1
    word, seed = fixed_word(sigma, "backward", 1)
    assert word == (4,) and seed == 4
    (past, future), (b, a) = fixed_word(sigma, "two_sided", 6)
    assert (b, a) == (4, 1)
    assert future[:4] == (1, 5, 1, 4)
    assert past[-1] == 4


def test_fixed_word_small_substitution():
    sigma = Substitution({1: (1, 2), 2: (2, 1)})
    word, seed = fixed_word(sigma, "forward", 3)
    assert word == (1, 2, 2) and seed == 1


def test_fixed_word_no_seed():
    sigma = Substitution({1: (2,), 2: (1,)})
    with pytest.raises(NoFixedSeed):
        fixed_word(sigma, "forward", 3)


def test_occurrence_addresses(E, J):
    _, its = associated_matrix(E, J)
    sigma = substitution_from(its)
    addrs = occurrence_addresses(sigma, 1)
    assert (5, 1, 1) in addrs           # images[5] = 151 2 154: symbol 5 at offset 1
    assert all(sigma.images[c][j] == c for (c, j, _m) in addrs)


def test_stationary_window_consistency(E, J):
    _, its = associated_matrix(E, J)
    sigma = substitution_from(its)
    past, future = stationary_window(sigma, (5, 1, 1), 40, 40)
    assert len(past) == 40 and len(future) == 41
    assert future[0] == 5
    # the window is substitution-stationary: blowing up the inner window
    # reproduces the outer one around the origin
    p2, f2 = stationary_window(sigma, (5, 1, 1), 300, 300)
    assert p2[-40:] == past and f2[:41] == future


def test_cylinder_single_symbol(E):
    lo, hi = cylinder_locate(E, (1,))
    assert lo == E.x[0] and hi == E.x[1]


def test_cylinder_matches_itinerary(E):
    word = (1, 5, 2, 1, 4)
    lo, hi = cylinder_locate(E, word)
    mid = (lo + hi) / Fraction(2)
    assert E.itinerary(mid, 5) == word


def test_cylinder_empty(E):
    # piece 3 maps onto slot 2 which is disjoint from piece 3
    with pytest.raises(EmptyCylinder):
        cylinder_locate(E, (3, 3))


def test_cylinder_width_shrinks(E, J):
    # widths contract by about the cycle scale per substitution level:
    # measured 6.2e-3 after two levels (56 symbols), 7.9e-4 after three
    _, its = associated_matrix(E, J)
    sigma = substitution_from(its)
    word, _ = fixed_word(sigma, "forward", 214)
    lo, hi = cylinder_locate(E, word[:56])
    w56 = float(hi - lo)
    lo, hi = cylinder_locate(E, word)
    w214 = float(hi - lo)
    assert w56 < 7e-3
    assert w214 < 1e-3
    assert w214 < w56 / 7


def test_induce_matches_brute_force_on_random_exchanges():
    import random
    from flipiet.errors import FlipIetError
    rng = random.Random(41)
    done = 0
    while done < 60:
        n = rng.randint(2, 5)
        base = list(range(1, n + 1))
        rng.shuffle(base)
        sp = tuple(v * rng.choice([1, -1]) for v in base)
        lengths = tuple(Fraction(rng.randint(1, 20), rng.randint(1, 20))
                        for _ in range(n))
        try:
            E2 = IetSpec(lengths, sp)
        except Exception:
            continue
        total = E2.total_length
        c = total * Fraction(rng.randint(0, 3), 17)
        d = c + total * Fraction(rng.randint(5, 13), 17)
        if d > total:
            continue
        try:
            ind = induce(E2, (c, d), cap=3000)
        except FlipIetError:
            continue
        # oracle: brute-force first return of midpoints of every induced piece
        for (lo, hi), t, word in zip(ind.parts, ind.return_times,
                                     ind.itineraries.words):
            x = (lo + hi) / 2
            z = x
            seen = []
            for _k in range(t):
                seen.append(E2.piece_of(z))
                z = E2.eval(z)
            assert tuple(seen) == word
            assert c <= z <= d
            assert ind.sub_iet.eval(x) == z
            # the return really is the first one
            z2 = E2.eval(x)
            for _k in range(1, t):
                assert not (c < z2 < d)
                z2 = E2.eval(z2)
        done += 1
    assert done == 60
