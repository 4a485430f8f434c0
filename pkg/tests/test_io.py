import json
import logging
import random

import pytest

from evidential.core.exceptions import InvalidModelError, ParseError
from evidential.io import (
    NetworkDocument,
    dumps_network,
    estimate_valuations,
    load_network,
    load_records,
    load_structure,
    loads_network,
    parse_records,
    save_network,
)
from evidential.network.dag import Dag

from .conftest import ab_network, binary, random_ds_network, random_probabilistic_network


class TestNetworkDocuments:
    def test_fixture_matches_constructed_network(self, fixtures_dir):
        assert load_network(fixtures_dir / "ab.json") == ab_network()

    def test_ds_fixture(self, fixtures_dir, mp_net):
        loaded = load_network(fixtures_dir / "modus_ponens.json")
        assert loaded.valuation("q").focals.allclose(mp_net.valuation("q").focals)
        assert loaded.dag == mp_net.dag

    def test_dump_is_canonical(self):
        rng = random.Random(41)
        for _ in range(10):
            for net in (random_probabilistic_network(rng), random_ds_network(rng)):
                text = dumps_network(net)
                assert dumps_network(loads_network(text)) == text
                assert text.endswith("\n")

    def test_save_then_load(self, ab_net, tmp_path):
        path = tmp_path / "net.json"
        save_network(ab_net, path)
        assert load_network(path) == ab_net
        document = json.loads(path.read_text())
        assert document["format"] == 1
        assert document["edges"] == [["a", "b"]]
        assert list(document) == ["format", "variables", "edges", "valuations"]

    def test_focal_sets_are_written_under_set(self, mp_net):
        document = json.loads(dumps_network(mp_net))
        q = next(v for v in document["valuations"] if v["node"] == "q")
        assert "entries" not in q
        assert q["focals"][0]["set"][0] == {"p": "t", "q": "t"}

    def test_negative_entry_is_rejected(self, fixtures_dir):
        document = json.loads((fixtures_dir / "ab.json").read_text())
        document["valuations"][1]["entries"][0]["p"] = 1.1
        document["valuations"][1]["entries"][1]["p"] = -0.1
        with pytest.raises(InvalidModelError, match="negative"):
            loads_network(json.dumps(document))

    def test_row_sum_reported(self, fixtures_dir):
        document = json.loads((fixtures_dir / "ab.json").read_text())
        document["valuations"][0]["entries"][0]["p"] = 0.5
        with pytest.raises(InvalidModelError, match=r"sums to 0\.8"):
            loads_network(json.dumps(document))

    @pytest.mark.parametrize("bad", [float("nan"), float("inf")])
    def test_non_finite_probability_is_rejected(self, fixtures_dir, bad):
        document = json.loads((fixtures_dir / "ab.json").read_text())
        document["valuations"][1]["entries"][0]["p"] = bad
        with pytest.raises(InvalidModelError, match="non-finite"):
            loads_network(json.dumps(document))

    @pytest.mark.parametrize("bad", [float("nan"), float("inf")])
    def test_non_finite_mass_is_rejected(self, fixtures_dir, bad):
        document = json.loads((fixtures_dir / "modus_ponens.json").read_text())
        document["valuations"][0]["focals"][0]["m"] = bad
        with pytest.raises(InvalidModelError, match="not a finite number"):
            loads_network(json.dumps(document))

    def test_incomplete_row(self, fixtures_dir):
        document = json.loads((fixtures_dir / "ab.json").read_text())
        del document["valuations"][1]["entries"][3]
        with pytest.raises(InvalidModelError, match="incomplete"):
            loads_network(json.dumps(document))

    def test_duplicate_focal_sets_are_merged(self, caplog):
        document = {
            "format": 1,
            "variables": [{"name": "x", "domain": ["t", "f"]}],
            "valuations": [
                {
                    "node": "x",
                    "kind": "ds",
                    "focals": [
                        {"set": [{"x": "t"}], "m": 0.25},
                        {"set": [{"x": "t"}], "m": 0.25},
                        {"set": [{"x": "t"}, {"x": "f"}], "m": 0.5},
                    ],
                }
            ],
        }
        with caplog.at_level(logging.WARNING, logger="evidential"):
            net = loads_network(json.dumps(document))
        assert "duplicate focal set" in caplog.text
        assert net.valuation("x").focals.mass(0b01) == pytest.approx(0.5)

    def test_malformed_json_reports_line(self):
        with pytest.raises(ParseError) as excinfo:
            loads_network('{\n  "format": 1,\n  "variables": [\n}')
        assert excinfo.value.line == 4

    def test_wrong_format_version(self):
        with pytest.raises(ParseError, match="format"):
            loads_network('{"format": 2, "variables": []}')

    def test_unknown_valuation_node(self):
        document = NetworkDocument.model_validate(
            {
                "variables": [{"name": "x", "domain": ["t", "f"]}],
                "valuations": [
                    {"node": "y", "kind": "probabilistic", "entries": []},
                ],
            }
        )
        with pytest.raises(InvalidModelError, match="unknown node 'y'"):
            document.to_network()

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidModelError, match="cannot read"):
            load_network(tmp_path / "absent.json")

    def test_structure_only(self, fixtures_dir):
        variables, dag = load_structure(fixtures_dir / "example_dag.json")
        assert [v.name for v in variables] == [f"p{i}" for i in range(1, 9)]
        assert dag.children("p4") == ("p5", "p6")


class TestRecords:
    def test_comments_and_blank_lines_are_skipped(self, fixtures_dir):
        table = load_records(fixtures_dir / "ab_records.csv")
        assert table.header == ["a", "b"]
        assert len(table.rows) == 6
        assert table.lines[0] == 3

    def test_cells_are_stripped(self):
        table = parse_records("a, b\n t , f \n")
        assert table.rows == [("t", "f")]

    def test_ragged_row(self):
        with pytest.raises(ParseError) as excinfo:
            parse_records("a,b\nt,t\nt\n")
        assert excinfo.value.line == 3

    def test_value_outside_domain(self):
        with pytest.raises(InvalidModelError, match="line 3, column b: value 'x'"):
            parse_records("a,b\nt,t\nt,x\n", {"a": binary("a"), "b": binary("b")})

    def test_duplicate_column(self):
        with pytest.raises(ParseError, match="duplicate column"):
            parse_records("a,a\nt,t\n")

    def test_missing_header(self):
        with pytest.raises(ParseError, match="no header"):
            parse_records("# only a comment\n\n")

    def test_frame(self, fixtures_dir):
        frame = load_records(fixtures_dir / "ab_records.csv").to_frame()
        assert list(frame.columns) == ["a", "b"]
        assert (frame["a"] == "t").sum() == 4


class TestEstimation:
    DAG = Dag(["a", "b"], [("a", "b")])
    VARIABLES = [binary("a"), binary("b")]

    def test_relative_frequencies(self, fixtures_dir):
        records = load_records(fixtures_dir / "ab_records.csv")
        a, b = estimate_valuations(self.DAG, records, variables=self.VARIABLES)
        assert a.table[()] == pytest.approx((4 / 6, 2 / 6))
        assert b.table[("t",)] == pytest.approx((0.75, 0.25))
        assert b.table[("f",)] == pytest.approx((0.5, 0.5))

    def test_smoothing(self, fixtures_dir):
        records = load_records(fixtures_dir / "ab_records.csv")
        a, b = estimate_valuations(self.DAG, records, smoothing=1.0, variables=self.VARIABLES)
        assert a.table[()] == pytest.approx((5 / 8, 3 / 8))
        assert b.table[("t",)] == pytest.approx((4 / 6, 2 / 6))

    def test_domains_from_observed_values(self, fixtures_dir):
        records = load_records(fixtures_dir / "ab_records.csv")
        a, _ = estimate_valuations(self.DAG, records)
        # observed domains are sorted, so "f" comes first
        assert a.table[()] == pytest.approx((2 / 6, 4 / 6))

    def test_unseen_configuration_is_uniform(self, caplog):
        records = parse_records("a,b\nt,t\nt,f\nt,t\n")
        with caplog.at_level(logging.WARNING, logger="evidential"):
            _, b = estimate_valuations(self.DAG, records, variables=self.VARIABLES)
        assert b.table[("f",)] == pytest.approx((0.5, 0.5))
        assert "never observed" in caplog.text

    def test_exact_recovery(self):
        rows = ["t,t"] * 63 + ["t,f"] * 7 + ["f,t"] * 15 + ["f,f"] * 15
        records = parse_records("a,b\n" + "\n".join(rows) + "\n")
        valuations = estimate_valuations(self.DAG, records, variables=self.VARIABLES)
        expected = ab_network()
        for valuation in valuations:
            for key, row in valuation.table.items():
                assert row == pytest.approx(expected.valuation(valuation.node).table[key])

    def test_missing_column(self):
        records = parse_records("a\nt\n")
        with pytest.raises(InvalidModelError, match="lack column"):
            estimate_valuations(self.DAG, records)

    def test_negative_smoothing(self, fixtures_dir):
        records = load_records(fixtures_dir / "ab_records.csv")
        with pytest.raises(InvalidModelError, match="negative"):
            estimate_valuations(self.DAG, records, smoothing=-1.0)
