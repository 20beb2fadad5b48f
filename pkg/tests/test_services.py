import pytest

from kloverify import settings
from kloverify.exceptions import DomainError
from kloverify.repositories import JsonLinesResultRepository
from kloverify.services import (
    BoundsService,
    MixedService,
    MomentsService,
    TableService,
    TracesService,
    VerifyService,
    bounds_prime,
    prime_range,
    verify_fingerprint,
    verify_prime,
)
from kloverify.transports import RunConfig

EXPECTED_CHECKS = [
    "moments",
    "closed_forms",
    "hasse",
    "theorem_v6",
    "legendre_sums",
    "epsilon_lemmas",
    "t2_closed_form",
    "t4_entry",
    "residual_bounds",
    "v6_hasse_bound",
    "transform",
    "supercharacter",
]


def test_prime_range_clamps_to_floor():
    assert prime_range(2, 20) == [5, 7, 11, 13, 17, 19]
    assert prime_range(2, 7, floor=2) == [2, 3, 5, 7]
    assert prime_range(24, 28) == []


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17])
def test_verify_prime_passes(p):
    report = verify_prime(p)
    assert report.passed, report.first_failure()
    assert [v.check for v in report.verdicts] == EXPECTED_CHECKS
    assert sorted(report.moments) == [2, 3, 4, 5, 6]


def test_verify_prime_with_oracle():
    report = verify_prime(13, nmax=8, with_oracle=True)
    assert report.verdicts[-1].check == "oracle"
    assert report.passed
    assert 8 in report.moments
    assert len(report.traces) == 10
    assert report.a_p_residual is not None and report.b_p_residual is not None


def test_oracle_respects_limit():
    report = verify_prime(13, with_oracle=True, oracle_limit=11)
    assert "oracle" not in [v.check for v in report.verdicts]


def test_fingerprint_tracks_content_options():
    base = RunConfig(command="verify", pmin=5, pmax=13)
    assert verify_fingerprint(base) == verify_fingerprint(RunConfig(command="verify", nmax=4))
    assert verify_fingerprint(base) != verify_fingerprint(RunConfig(command="verify", seed=1))
    assert verify_fingerprint(base) != verify_fingerprint(
        RunConfig(command="verify", with_oracle=True)
    )
    assert verify_fingerprint(base) != verify_fingerprint(
        RunConfig(command="verify", transform_samples=8)
    )


def test_transform_sample_count_is_configurable():
    (default,) = [v for v in verify_prime(7).verdicts if v.check == "transform"]
    assert default.detail == f"{settings.TRANSFORM_SAMPLES} quádruplas"

    (few,) = [v for v in verify_prime(7, transform_samples=3).verdicts if v.check == "transform"]
    assert few.passed and few.detail == "3 quádruplas"


def test_verify_service_uses_cache(tmp_path):
    config = RunConfig(command="verify", pmin=5, pmax=13)
    repository = JsonLinesResultRepository(tmp_path / "cache.jsonl")

    first = VerifyService(repository)
    reports = first.execute(config)
    assert [r.p for r in reports] == [5, 7, 11, 13]
    assert first.kernel_calls == 4

    second = VerifyService(JsonLinesResultRepository(tmp_path / "cache.jsonl"))
    cached = second.execute(config)
    assert second.kernel_calls == 0
    assert [r.moments for r in cached] == [r.moments for r in reports]

    third = VerifyService(JsonLinesResultRepository(tmp_path / "cache.jsonl"))
    third.execute(RunConfig(command="verify", pmin=5, pmax=17))
    assert third.kernel_calls == 1


def test_verify_service_in_parallel_keeps_order():
    config = RunConfig(command="verify", pmin=5, pmax=19, jobs=2)
    serial = VerifyService().execute(RunConfig(command="verify", pmin=5, pmax=19))
    parallel = VerifyService().execute(config)
    assert [r.p for r in parallel] == [5, 7, 11, 13, 17, 19]
    assert [r.moments for r in parallel] == [r.moments for r in serial]


def test_moments_service(ctx):
    rows = MomentsService().execute(RunConfig(command="moments", p=ctx.p, nmax=7, with_oracle=True))
    assert [row.n for row in rows] == [2, 3, 4, 5, 6, 7]
    assert rows[0].check == "closed_form+oracle"
    assert rows[3].check == "oracle"
    assert rows[4].check == "theorem_v6+oracle"
    assert all(row.agrees for row in rows)


def test_moments_service_without_oracle():
    rows = MomentsService().execute(RunConfig(command="moments", p=7, nmax=5))
    assert [row.value for row in rows[:3]] == [41, 64, 517]
    assert rows[-1].check == ""
    assert rows[-1].agrees is None


def test_traces_service():
    records = TracesService().execute(RunConfig(command="traces", p=11))
    assert [record.k for record in records] == [2, 3, 4, 5, 6, 7, 8, 10]
    assert all(record.epsilon == -1 - record.trace for record in records)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 503])
def test_bounds_prime(p):
    record = bounds_prime(p)
    assert record.passed
    assert record.v6_exact == (p <= 499)
    assert record.v6_ratio <= 8.5


def test_bounds_service_includes_tiny_primes():
    records = BoundsService().execute(RunConfig(command="bounds", pmin=2, pmax=13))
    assert [record.p for record in records] == [2, 3, 5, 7, 11, 13]


def test_table_service_at_p5():
    rows = TableService().execute(RunConfig(command="table", p=5))
    assert len(rows) == 3 * 7
    sigma = [row for row in rows if row.section == "sigma"]
    U = [row for row in rows if row.section == "U"]
    T1 = [row for row in rows if row.section == "T1"]
    assert sigma[-1].cells == ("1",) * 7
    assert U[-1].cells[-1] == "0.2"
    assert T1[0].cells[-1] == "sqrt(4)"
    assert T1[-1].cells[0] == "sqrt(4)"


def test_mixed_service():
    (record,) = MixedService().execute(
        RunConfig(command="mixed", p=7, multipliers=(2, 3), with_oracle=True)
    )
    assert record.completed == -35
    assert record.value == -34
    assert record.oracle == record.value
    assert record.residual is None
    assert record.passed


def test_mixed_service_fourth_moment_residual():
    (record,) = MixedService().execute(RunConfig(command="mixed", p=13, multipliers=(2, 3, 5)))
    assert record.residual is not None


def test_mixed_service_skips_residual_for_paired_multipliers():
    (record,) = MixedService().execute(RunConfig(command="mixed", p=13, multipliers=(2, 2, 1)))
    assert record.residual is None


def test_mixed_service_rejects_non_prime():
    with pytest.raises(DomainError):
        MixedService().execute(RunConfig(command="mixed", p=9, multipliers=(2,)))


@pytest.mark.slow
def test_verify_range_to_101():
    reports = VerifyService().execute(RunConfig(command="verify", pmin=5, pmax=101, jobs=2))
    failures = [(r.p, r.first_failure()) for r in reports if not r.passed]
    assert failures == []


@pytest.mark.slow
def test_bounds_up_to_ten_thousand():
    records = BoundsService().execute(RunConfig(command="bounds", pmin=2, pmax=10**4, jobs=4))
    assert [record.p for record in records if not record.passed] == []
    assert all(record.barrier_ratio < 1 for record in records)
