"""Smoke test for the circuit extension module."""

import json

import circuit


def main():
    assert set(circuit.builtin_names()) >= {"alg1", "alg2", "alg3"}

    alg2 = circuit.Schedule.builtin("alg2")
    report = alg2.simulate("FREE")
    assert report.feasible
    assert report.total_time == "361/16", report.total_time
    assert report.marks["partA-end"] == "73/8"
    assert json.loads(report.to_json())["feasible"] is True

    dawn = alg2.simulate("DAWN")
    assert not dawn.feasible
    assert any(kind == "phase-not-dawn" for kind, _, _ in dawn.violations), dawn.violations

    assert alg2.verify("361/16")
    assert not alg2.verify("22")

    again = circuit.Schedule.parse(alg2.text())
    assert again.text() == alg2.text()
    assert again.simulate().total_time == "361/16"

    ok, cert = circuit.implies("AB", "14", "-11")
    assert ok and circuit.verify_certificate(cert)
    ok, witness = circuit.implies("roundtrip", "28", "-375/8")
    assert not ok and witness

    assert circuit.min_t("AB", "23/16") == "73/8"
    assert circuit.compose([("14", "-11")], [("96/7", "-258/7"), ("16", "-45")]) == ("23/16", "361/16")

    value, sched = circuit.best_reach("3", den=12)
    assert value == "7/3"
    assert sched.simulate().feasible
    days, _ = circuit.roundtrip("1/2", "2")
    assert days == "1"

    try:
        circuit.Schedule.parse("take 0.5")
    except ValueError:
        pass
    else:
        raise AssertionError("decimal accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
