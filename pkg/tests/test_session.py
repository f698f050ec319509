from __future__ import annotations

from odogibbs import DyadicRational, OdometerPoint, RunConfig, Session, Word, build_language, nu_A_series
from odogibbs.thermo import pressure


def _session() -> Session:
    return Session(RunConfig(max_len=12, depth=28, tolerance="2^-16", workers=2))


def test_shared_pieces_are_built_once():
    session = _session()

    table = session.table()
    assert table is session.table()
    assert (table.max_len, table.build_depth) == (12, 28)
    assert session.pool.workers == 2

    assert session.series() == nu_A_series(32)
    assert session.mu_beta() is session.mu_beta()
    assert session.pressure() == pressure()


def test_prebuilt_table():
    table = build_language(10)
    session = Session(table=table)

    assert session.table() is table


def test_computations_follow_the_config():
    session = _session()

    assert session.measure(Word.beta(1)).interval.width() <= DyadicRational.power_of_two(-16)
    assert session.gibbs(5).satisfied
    assert session.orbit(OdometerPoint.zero(), 5, 64).failure
    assert session.scan((8,), points=[OdometerPoint.zero()]).non_generic == [0]
