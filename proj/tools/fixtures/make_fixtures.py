"""Regenerates the bundled case-study fixtures under data/.

Every number below is transcribed from the published case-study tables; run
this script after editing it, then refresh data/MANIFEST.sha256 with
`cd data && sha256sum *.json > MANIFEST.sha256`.
"""
import json
import pathlib

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"

QUAL = ["g1_1", "g1_2", "g2_3", "g3_4", "g3_5", "g4_6", "g4_7"]
FIN = ["g5_8", "g5_9", "g5_10", "g5_11", "g5_12"]
IDS = QUAL + FIN
GROUPS = {"g1": "development", "g2": "technological", "g3": "market",
          "g4": "production", "g5": "financial"}


def criterion(cid):
    c = {"id": cid, "group": GROUPS[cid[:2]],
         "direction": "cost" if cid == "g5_11" else "gain"}
    if cid in ("g4_6", "g4_7"):
        c["scale"] = {"type": "ordinal", "min": 0, "max": 1}
    elif cid in QUAL:
        c["scale"] = {"type": "ordinal", "min": 1, "max": 5}
    else:
        c["scale"] = {"type": "ratio"}
    c["thresholds"] = {"q": 0, "p": 0}
    return c


EVAL = {
    "A": [4, 3, 3, 4, 3, 0, 0, 0.55, 0.06, 0.24, 0.18, 0.74],
    "B": [4, 5, 5, 5, 1, 0, 1, 0.72, 0.17, 0.03, 0.12, 0.51],
    "C": [5, 3, 5, 2, 5, 1, 1, 0.18, 0.05, 0.94, 0.3, 0.56],
    "D": [4, 5, 3, 2, 5, 1, 0, 0.06, 0.14, 0.52, 0.11, 0.26],
}

INTERVALS = {
    "A": [4, 3, [3, 5], [4, 5], [3, 4], 0, 0, [0.44, 0.55], [0.05, 0.06], [0.19, 0.24],
          [0.18, 0.22], [0.59, 0.74]],
    "B": [4, 5, [4, 5], [4, 5], [1, 3], 0, 1, [0.58, 0.72], [0.14, 0.17], [0.02, 0.03],
          [0.12, 0.14], [0.41, 0.51]],
    "C": [5, 3, [4, 5], [2, 4], [4, 5], 1, 1, [0.14, 0.18], [0.04, 0.05], [0.75, 0.94],
          [0.3, 0.36], [0.45, 0.56]],
    "D": [4, 5, [3, 5], [2, 3], [4, 5], 1, 0, [0.05, 0.06], [0.11, 0.14], [0.42, 0.52],
          [0.11, 0.13], [0.21, 0.26]],
}

QUAL_PROFILES = [
    [1, 1, 1, 1, 1, 0, 0],
    [2, 2, 2, 2, 2, 0, 0],
    [3, 3, 3, 3, 3, 0, 1],
    [4, 4, 4, 4, 4, 1, 1],
]

# Sector financial profiles b_1..b_4 over g5_8, g5_9, g5_10, g5_11, g5_12.
FIN_PROFILES = {
    "A": [[0, 0.03, -0.03, 5.44, 0.02], [0.01, 0.05, 0.01, 1.42, 0.07],
          [0.2, 0.07, 0.05, 0.14, 0.18], [1.34, 0.1, 0.1, 0.14, 0.21]],
    "B": [[0, 0.03, -0.01, 3.72, 0.01], [0.17, 0.05, 0.03, 1.22, 0.06],
          [1.34, 0.07, 0.09, 0.31, 0.16], [1.34, 0.1, 0.1, 0.14, 0.21]],
    "C": [[0, 0.03, -0.01, 3.14, 0.01], [0.09, 0.05, 0.04, 1.07, 0.06],
          [0.43, 0.07, 0.1, 0.28, 0.16], [1.34, 0.1, 0.1, 0.14, 0.21]],
    "D": [[0, 0.03, -0.04, 2.55, 0.03], [0.07, 0.05, 0, 0.67, 0.08],
          [0.91, 0.07, 0.04, 0.14, 0.21], [1.34, 0.1, 0.1, 0.14, 0.21]],
}

WEIGHTS = {
    "DM1": [0.025, 0.025, 0.165, 0.056, 0.056, 0.196, 0.181, 0.04, 0.04, 0.072, 0.072, 0.072],
    "DM2": [0.053, 0.053, 0.0934, 0.174, 0.184, 0.164, 0.023, 0.033, 0.033, 0.0632, 0.0632,
            0.0632],
    "DM3": [0.112, 0.112, 0.139, 0.019, 0.019, 0.072, 0.06, 0.046, 0.046, 0.125, 0.125, 0.125],
    "DM4": [0.033, 0.033, 0.149, 0.054, 0.16, 0.064, 0.17, 0.023, 0.023, 0.097, 0.097, 0.097],
    "DM5": [0.022, 0.022, 0.1, 0.061, 0.074, 0.035, 0.087, 0.112, 0.112, 0.125, 0.125, 0.125],
}

DM1_DECK = {
    "ranks": [["g1_1", "g1_2"], ["g5_8", "g5_9"], ["g3_4", "g3_5"],
              ["g5_10", "g5_11", "g5_12"], ["g2_3"], ["g4_7"], ["g4_6"]],
    "white_cards": [0, 0, 0, 5, 0, 0],
    "z": 8,
}

CASH_FLOWS = {
    "A": [-43534.00, 69616.91, 9178.96, 118470.63],
    "B": [-8715.00, -15528.00, 52196.00, 58422.00, 57472.00],
    "C": [-211100.00, 126543.19, 196034.36, 233763.68, 438942.51, 568339.16],
    "D": [-62272.07, 204057.11, 1094740.87],
}

SCENARIO_ROWS = {
    "A": {"0.2": [-52240.80, 55693.53, 7343.17, 94776.50],
          "0.4": [-60947.60, 41770.15, 5507.37, 71082.38]},
    "B": {"0.2": [-10458.00, -18633.60, 41756.80, 46737.60, 45977.60],
          "0.4": [-12201.00, -21739.20, 31317.60, 35053.20, 34483.20]},
    "C": {"0.2": [-253320.00, 101234.55, 156827.48, 187010.95, 351154.01, 454671.33],
          "0.4": [-295540.00, 75925.91, 117620.61, 140258.21, 263365.51, 341003.49]},
    "D": {"0.2": [-74726.48, 163245.68, 875792.69],
          "0.4": [-87180.89, 122434.26, 656844.52]},
}

NPV = {
    "A": [140275.51, 75092.75, 36151.86],
    "B": [102405.74, 73362.71, 44319.68],
    "C": [1032614.23, 642152.30, 383819.35],
    "D": [988208.95, 767488.48, 546768.00],
}

ACCEPTABILITY = {
    "DM1": {"A": [0, 0, 36, 64, 0], "B": [0, 0, 0, 74, 26], "C": [0, 0, 0, 11, 89],
            "D": [0, 0, 63, 37, 0]},
    "DM2": {"A": [0, 0, 0, 100, 0], "B": [0, 17, 18, 65, 0], "C": [0, 0, 46, 31, 23],
            "D": [0, 40, 47, 13, 0]},
    "DM3": {"A": [0, 0, 0, 100, 0], "B": [0, 0, 0, 0, 100], "C": [0, 0, 0, 46, 54],
            "D": [0, 0, 0, 57, 43]},
    "DM4": {"A": [0, 0, 23, 77, 0], "B": [0, 5, 14, 33, 48], "C": [0, 0, 0, 0, 100],
            "D": [0, 0, 49, 51, 0]},
    "DM5": {"A": [0, 0, 27, 73, 0], "B": [0, 0, 22, 18, 60], "C": [0, 0, 69, 20, 11],
            "D": [0, 0, 55, 45, 0]},
    "group": {"A": [0, 0, 10, 90, 0], "B": [0, 6, 20, 34, 40], "C": [0, 0, 31, 35, 34],
              "D": [0, 0, 40, 50, 10]},
}

INTERVAL_WEIGHTS = {
    "g1_1": [0.022, 0.112], "g1_2": [0.022, 0.112], "g2_3": [0.0934, 0.165],
    "g3_4": [0.019, 0.174], "g3_5": [0.019, 0.184], "g4_6": [0.035, 0.196],
    "g4_7": [0.023, 0.181], "g5_8": [0.023, 0.112], "g5_9": [0.023, 0.112],
    "g5_10": [0.0632, 0.125], "g5_11": [0.0632, 0.125], "g5_12": [0.0632, 0.125],
}


def evaluations(rows):
    return {cid: v for cid, v in zip(IDS, rows)}


def ratio_samples():
    """Five-firm sector samples whose quartiles are the sector profiles.

    R&D/Sales (g5_9) profiles are set by the decision makers and get no sample.
    """
    out = {}
    for sector, rows in FIN_PROFILES.items():
        samples = {}
        for j, cid in enumerate(FIN):
            if cid == "g5_9":
                continue
            b1, b2, b3 = rows[0][j], rows[1][j], rows[2][j]
            samples[cid] = [b1, b1, b2, b3, b3] if cid != "g5_11" else [b3, b3, b2, b1, b1]
        out["sector_" + sector] = samples
    return out


def project(intervals):
    base = [q + f for q, f in zip(QUAL_PROFILES, FIN_PROFILES["A"])]
    overrides = {
        "sector_" + s: {cid: [rows[k][j] for k in range(4)] for j, cid in enumerate(FIN)}
        for s, rows in FIN_PROFILES.items()
    }
    table = INTERVALS if intervals else EVAL
    return {
        "schema_version": 1,
        "name": "Innovative SME credit case study" + (" (interval evaluations)" if intervals else ""),
        "criteria": [criterion(c) for c in IDS],
        "alternatives": [{"id": a, "sector": "sector_" + a, "evaluations": evaluations(r)}
                         for a, r in table.items()],
        "profiles": {"categories": ["C1", "C2", "C3", "C4", "C5"], "base": base,
                     "overrides": overrides},
        "decision_makers": [{"id": dm, "weights": dict(zip(IDS, w))} for dm, w in WEIGHTS.items()],
        "lambda": [0.65, 0.85],
        "run": {"draws": 10000, "seed": 42, "rule": "pessimistic-paper",
                "evaluation_sampling": intervals, "cutoff": 3},
        "cash_flows": CASH_FLOWS,
        "discount_rate": 0.0793,
        "ratio_samples": ratio_samples(),
    }


def main():
    DATA.mkdir(exist_ok=True)
    files = {
        "case_study.json": project(False),
        "case_study_intervals.json": project(True),
        "dm1_deck.json": DM1_DECK,
        "reference_tables.json": {
            "acceptability_percent": ACCEPTABILITY,
            "interval_weights": INTERVAL_WEIGHTS,
            "npv": {"rate": 0.0793, "scenarios": [0, 0.2, 0.4], "values": NPV},
            "scenario_rows": SCENARIO_ROWS,
            "simos_dm1": {"k": [1, 1.63, 2.27, 2.90, 6.72, 7.36, 8], "total": 40.63},
            "modal_consensus": {"A": 4, "B": 5, "C": 5, "D": 3},
        },
    }
    for name, content in files.items():
        (DATA / name).write_text(json.dumps(content, indent=2) + "\n")


if __name__ == "__main__":
    main()
