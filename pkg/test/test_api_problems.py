import os
import unittest

import yaml

from test.test_api_base import BaseTestCase


class ProblemsApiTestCase(BaseTestCase):
    @classmethod
    def setUpClass(cls) -> None:
        super(ProblemsApiTestCase, cls).setUpClass()

        def load(name):
            with open(os.path.join(cls.fixtures, name), "rt", encoding="utf8") as f:
                return yaml.safe_load(f)

        cls.p1 = load("p1.yaml")
        cls.overlap = load("p1_overlap.yaml")
        cls.square = load("square.yaml")
        cls.triangle = load("triangle.yaml")

    def post(self, path, document, **params):
        return self.client.post(f"{self.problems_endpoint}/{path}", json=document, query_string=params)

    # ------------------------------------------------------------------------------------------------------------------
    # Validate

    def test_validate(self):
        """ Structural checks of a valid problem """
        res = self.post("validate", self.p1)
        self.assertEqual(res.status_code, 200)
        self.assertEqual(res.json["status"], "pass")

    def test_validate_overlap(self):
        """ A failed check is a report, not an error """
        res = self.post("validate", self.overlap)
        self.assertEqual(res.status_code, 200)
        self.assertEqual(res.json["status"], "fail")
        self.assertEqual(res.json["checks"][0]["check"], "triangulation-overlap")

    # ------------------------------------------------------------------------------------------------------------------
    # Series

    def test_series(self):
        res = self.post("series", self.p1)
        self.assertEqual(res.status_code, 200)
        values = [r["value"] for r in res.json["tables"]["residue-series"]]
        self.assertEqual(values, ["1", "4", "16"])

    def test_series_bound(self):
        """ Query parameters override the document """
        res = self.post("series", self.p1, bound=2)
        self.assertEqual(len(res.json["tables"]["residue-series"]), 2)

    def test_series_completion(self):
        res = self.post("series", self.p1, v0="1,-4")
        values = [r["value"] for r in res.json["tables"]["residue-series"]]
        self.assertEqual(values, ["1", "4", "16"])

    def test_series_bad_completion(self):
        res = self.post("series", self.p1, v0="0,1")
        self.assertEqual(res.status_code, 422)
        self.assertEqual(res.json["check"], "completion")

    def test_series_missing_field(self):
        document = dict(self.p1)
        del document["bound"]
        res = self.post("series", document)
        self.assertEqual(res.status_code, 400)
        self.assertEqual(res.json["error_type"], "ProblemFileError")
        self.assertEqual(res.json["field"], "bound")

    def test_series_not_reflexive(self):
        document = dict(self.triangle, nef_partition=[[1, 2, 3]])
        res = self.post("series", document)
        self.assertEqual(res.status_code, 422)
        self.assertEqual(res.json["check"], "not-reflexive")

    # ------------------------------------------------------------------------------------------------------------------
    # Mixed volume

    def test_mixed_volume(self):
        res = self.post("mixed-volume", self.square)
        self.assertEqual(res.status_code, 200)
        self.assertEqual(res.json["status"], "pass")
        volumes = {tuple(v["k_bar"]): v["value"] for v in res.json["mixed_volumes"]}
        self.assertEqual(volumes[(1, 1)], "4")

    def test_mixed_volume_without_partition(self):
        res = self.post("mixed-volume", self.triangle)
        self.assertEqual(res.status_code, 422)
        self.assertEqual(res.json["check"], "nef-partition")

    # ------------------------------------------------------------------------------------------------------------------
    # Verify

    def test_verify(self):
        res = self.post("verify", self.p1, seed=11)
        self.assertEqual(res.status_code, 200)
        self.assertEqual(res.json["status"], "pass")


if __name__ == "__main__":
    unittest.main()
