# -*- coding: utf-8 -*-
"""HTTP 接口测试"""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from api.main import app

GROWTH = [0.01 + 0.002 * np.sin(i) + 0.0005 * i for i in range(24)]


def payload(values, role, start="1990"):
    return {"frequency": "ANNUAL", "start": start, "unit": "RATE_PER_YEAR", "role": role,
            "values": list(values)}


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


class TestSystem:
    def test_health(self, client):
        body = client.get("/api/v1/health").json()
        assert body["status"] == "ok"

    def test_presets(self, client):
        names = [p["name"] for p in client.get("/api/v1/presets").json()["presets"]]
        assert "ue-annual" in names
        assert names == sorted(names)


class TestPredict:
    def test_preset(self, client):
        body = client.post(
            "/api/v1/predict",
            json={"preset": "ue-annual", "inputs": {"LF_GROWTH": payload([0.02] * 5, "LF_GROWTH", "2000")}},
        ).json()
        assert body["success"]
        assert body["predicted"]["values"] == pytest.approx([-2.1 * 0.02 + 0.098] * 5)

    def test_needs_exactly_one_model(self, client):
        body = client.post(
            "/api/v1/predict", json={"inputs": {"LF_GROWTH": payload([0.02], "LF_GROWTH")}}
        ).json()
        assert not body["success"]
        assert body["error"]["error"] == "InvalidArgument"
        assert body["error"]["exit_code"] == 3

    def test_missing_regressor(self, client):
        body = client.post(
            "/api/v1/predict", json={"preset": "ue-annual", "inputs": {}}
        ).json()
        assert body["error"]["error"] == "MissingRegressor"


class TestFitAndDiagnose:
    def test_fit_recovers_line(self, client):
        ue = [-2.1 * g + 0.098 for g in GROWTH]
        body = client.post(
            "/api/v1/fit",
            json={
                "observed": payload(ue, "UE"),
                "inputs": {"LF_GROWTH": payload(GROWTH, "LF_GROWTH")},
                "config": {
                    "slope_grid": {"LF_GROWTH": {"min": -5.0, "max": 0.0, "step": 0.01}},
                    "lag_grid": {"LF_GROWTH": [0]},
                },
            },
        ).json()
        assert body["success"], body.get("error")
        segment = body["result"]["model"]["segments"][0]
        assert segment["slopes"][0]["value"] == pytest.approx(-2.1, abs=1e-6)
        assert segment["intercept"] == pytest.approx(0.098, abs=1e-6)

    def test_diagnose_residual(self, client):
        rng = np.random.default_rng(4)
        body = client.post(
            "/api/v1/diagnose",
            json={"residual": payload(rng.standard_normal(80).tolist(), "UE_RESIDUAL", "1900")},
        ).json()
        assert body["success"]
        assert body["diagnostics"]["residual"]["adf"]["reject_at"]["1%"]
        assert "cointegration" not in body["diagnostics"]

    def test_diagnose_short_series_reports_error(self, client):
        body = client.post(
            "/api/v1/diagnose", json={"residual": payload([0.1, 0.2, 0.15], "UE_RESIDUAL")}
        ).json()
        assert body["success"]
        assert body["diagnostics"]["residual"]["adf"]["error"]["error"] == "InsufficientLength"
