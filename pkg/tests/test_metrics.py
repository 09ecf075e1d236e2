import math

import pytest
from hypothesis import given, strategies as st

from inspectlens import (
    BAND_TABLE,
    Aggregation,
    BandLabel,
    DefectCounts,
    EmptyInput,
    InspectionSession,
    MissingCounts,
    OutOfDomain,
    Phase,
    PhaseObservation,
    ProjectRecord,
    UndefinedMetric,
    aggregate_metric,
    classify_band,
    compute_di,
    compute_ipm,
    project_report,
)
from conftest import make_record, make_session


counts_strategy = st.integers(0, 500).flatmap(
    lambda total: st.tuples(st.integers(0, total), st.just(total))
).map(lambda t: DefectCounts(inspection_found=t[0], total_found=t[1]))


class TestDefectCounts:
    def test_inspection_cannot_exceed_total(self):
        with pytest.raises(ValueError):
            DefectCounts(inspection_found=5, total_found=4)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            DefectCounts(inspection_found=-1, total_found=4)

    def test_non_integer_rejected(self):
        with pytest.raises(ValueError):
            DefectCounts(inspection_found=1.5, total_found=4)


class TestComputeDi:
    def test_zero_inspection_defects(self):
        assert compute_di(DefectCounts(0, 10)) == 0.0

    def test_all_defects_by_inspection(self):
        assert compute_di(DefectCounts(10, 10)) == 1.0

    def test_plain_ratio(self):
        assert compute_di(DefectCounts(53, 100)) == 0.53

    def test_no_defects_is_undefined(self):
        with pytest.raises(UndefinedMetric):
            compute_di(DefectCounts(0, 0))

    @given(counts_strategy)
    def test_always_in_unit_interval(self, counts):
        if counts.total_found == 0:
            with pytest.raises(UndefinedMetric):
                compute_di(counts)
        else:
            assert 0.0 <= compute_di(counts) <= 1.0


class TestComputeIpm:
    def test_zero_defects(self):
        assert compute_ipm(0, make_session()) == 0.0

    def test_direct_formula(self):
        # IE = 3 * (2 + 2) = 12
        session = make_session(num_inspectors=3, inspection_time=2.0, prep_time=2.0)
        assert compute_ipm(12, session) == 1.0

    def test_doubling_inspectors_halves_ipm(self):
        base = make_session(num_inspectors=3, inspection_time=2.0, prep_time=2.0)
        doubled = make_session(num_inspectors=6, inspection_time=2.0, prep_time=2.0)
        assert compute_ipm(12, doubled) == pytest.approx(
            compute_ipm(12, base) / 2, rel=1e-12
        )

    def test_doubling_per_person_time_halves_ipm(self):
        base = make_session(inspection_time=2.0, prep_time=1.0)
        doubled = make_session(inspection_time=4.0, prep_time=2.0)
        assert compute_ipm(9, doubled) == pytest.approx(
            compute_ipm(9, base) / 2, rel=1e-12
        )

    @given(st.integers(0, 50), st.integers(0, 20))
    def test_homogeneous_in_defect_count(self, n_i, k):
        session = make_session()
        assert compute_ipm(k * n_i, session) == pytest.approx(
            k * compute_ipm(n_i, session), rel=1e-12, abs=0.0
        )

    def test_session_invariants(self):
        with pytest.raises(ValueError):
            make_session(num_inspectors=0)
        with pytest.raises(ValueError):
            make_session(inspection_time=0.0)
        with pytest.raises(ValueError):
            make_session(prep_time=-0.5)
        with pytest.raises(ValueError):
            make_session(function_points=0.0)


class TestAggregate:
    def test_published_p1_average(self):
        # phase DI values 0.53 / 0.50 / 0.50 average to 0.51
        assert aggregate_metric([0.53, 0.50, 0.50]) == pytest.approx(0.51, abs=1e-12)

    def test_published_p6_average(self):
        avg = aggregate_metric([0.48, 0.50, 0.21])
        assert avg == pytest.approx(0.39666666666666667, abs=1e-12)
        assert round(avg, 2) == 0.40

    def test_single_element(self):
        assert aggregate_metric([0.42]) == 0.42

    def test_empty_rejected(self):
        with pytest.raises(EmptyInput):
            aggregate_metric([])

    def test_pooled_needs_counts(self):
        with pytest.raises(MissingCounts):
            aggregate_metric([0.5], Aggregation.POOLED_COUNTS)

    def test_pooled_needs_aligned_counts(self):
        with pytest.raises(MissingCounts):
            aggregate_metric(
                [0.5, 0.5], Aggregation.POOLED_COUNTS, counts=[DefectCounts(1, 2)]
            )

    def test_pooled_ratio(self):
        counts = [DefectCounts(1, 4), DefectCounts(3, 4)]
        values = [compute_di(c) for c in counts]
        assert aggregate_metric(values, Aggregation.POOLED_COUNTS, counts) == 0.5

    def test_pooled_all_zero_defects_undefined(self):
        counts = [DefectCounts(0, 0), DefectCounts(0, 0)]
        with pytest.raises(UndefinedMetric):
            aggregate_metric([0.0, 0.0], Aggregation.POOLED_COUNTS, counts)

    @given(st.lists(st.tuples(st.integers(1, 200), st.integers(0, 200)), min_size=1, max_size=6))
    def test_mean_equals_pooled_for_shared_total(self, pairs):
        # all phases share one total; clip inspection counts into range
        total = pairs[0][0]
        counts = [DefectCounts(min(found, total), total) for _, found in pairs]
        values = [compute_di(c) for c in counts]
        mean = aggregate_metric(values, Aggregation.MEAN_OF_PHASES)
        pooled = aggregate_metric(values, Aggregation.POOLED_COUNTS, counts)
        assert mean == pytest.approx(pooled, abs=1e-12)


class TestBands:
    def test_table_has_ten_ordered_rows(self):
        assert len(BAND_TABLE) == 10
        assert [b.label for b in BAND_TABLE] == sorted(b.label for b in BAND_TABLE)

    def test_bands_tile_unit_interval(self):
        assert BAND_TABLE[0].lower == 0.0
        assert BAND_TABLE[-1].upper == 1.0
        for prev, nxt in zip(BAND_TABLE, BAND_TABLE[1:]):
            assert prev.upper == nxt.lower

    @pytest.mark.parametrize(
        "di,label",
        [
            (0.05, BandLabel.WORSE),
            (0.35, BandLabel.NORMAL),
            (0.4, BandLabel.ABOVE_NORMAL),  # shared endpoint goes to the upper band
            (1.0, BandLabel.IDEAL),         # closed top endpoint
            (0.0, BandLabel.WORSE),
            (0.67, BandLabel.VERY_HIGH),
            (0.21, BandLabel.LOW),
        ],
    )
    def test_classification(self, di, label):
        assert classify_band(di).label is label

    @pytest.mark.parametrize("di", [-0.01, 1.01, math.nan])
    def test_out_of_domain(self, di):
        with pytest.raises(OutOfDomain):
            classify_band(di)

    @given(st.floats(0.0, 1.0, allow_nan=False))
    def test_total_on_unit_interval(self, di):
        band = classify_band(di)
        assert band.contains(di)
        assert sum(b.contains(di) for b in BAND_TABLE) == 1

    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_monotone(self, a, b):
        lo, hi = min(a, b), max(a, b)
        assert classify_band(lo).label <= classify_band(hi).label


class TestProjectReport:
    def test_published_p1_values(self):
        # counts engineered to give phase DI 0.53 / 0.50 / 0.50
        record = make_record(phase_counts=((53, 100), (50, 100), (50, 100)))
        report = project_report(record)
        assert report.avg_di == pytest.approx(0.51, abs=1e-12)
        assert report.avg_di_band.label is BandLabel.HIGH
        assert not report.partial

    def test_zero_defect_phase_marks_partial(self):
        record = make_record(phase_counts=((10, 20), (0, 0), (9, 18)))
        report = project_report(record)
        assert report.partial
        des = next(p for p in report.phases if p.phase is Phase.DESIGN)
        assert des.di is None
        assert des.note is not None and "undefined" in des.note
        assert des.ipm == 0.0
        # average covers the two defined phases only
        assert report.avg_di == pytest.approx(0.5)

    def test_identical_phases_average_to_same_value(self):
        record = make_record(phase_counts=((7, 20), (7, 20), (7, 20)))
        report = project_report(record)
        assert report.avg_di == pytest.approx(0.35, abs=1e-12)
        assert report.avg_di_band.label is BandLabel.NORMAL

    def test_empty_record_rejected(self):
        with pytest.raises(EmptyInput):
            project_report(ProjectRecord(id="P9", phases=()))

    def test_duplicate_phase_rejected_at_construction(self):
        obs = make_record().phases[0]
        with pytest.raises(ValueError):
            ProjectRecord(id="P1", phases=(obs, obs))

    def test_phases_reported_in_lifecycle_order(self):
        record = make_record()
        shuffled = ProjectRecord(id="PX", phases=tuple(reversed(record.phases)))
        report = project_report(shuffled)
        assert [p.phase for p in report.phases] == [
            Phase.REQUIREMENTS,
            Phase.DESIGN,
            Phase.IMPLEMENTATION,
        ]
