import os
import unittest

from toric_residues.app import create_app


class BaseTestCase(unittest.TestCase):
    """Flask test client against a freshly configured app"""

    @classmethod
    def setUpClass(cls) -> None:
        os.environ["FLASK_DEBUG"] = "0"
        os.environ["LOG_ALL_REQUESTS"] = "true"
        os.environ["LOG_LEVEL"] = "WARNING"
        os.environ["TORIC_SAMPLES"] = "4"
        os.environ["API_EP_PROBLEMS"] = "/problems"

        cls.app = create_app()
        cls.app.testing = True
        cls.config = cls.app.config
        cls.client = cls.app.test_client()

        # Create API endpoints
        cls.problems_endpoint = os.environ["API_EP_PROBLEMS"]
        cls.fixtures = os.path.join(os.path.dirname(__file__), "fixtures")
