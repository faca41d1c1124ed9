import unittest

from toric_residues.config import Settings, strtobool


class SettingsTestCase(unittest.TestCase):
    def test_defaults(self):
        settings = Settings.from_env({})
        self.assertEqual(settings.samples, 12)
        self.assertEqual(settings.seed_samples, 100)
        self.assertFalse(settings.log_all_requests)

    def test_environment(self):
        settings = Settings.from_env(
            {"TORIC_SEED_SAMPLES": "150", "TORIC_JOBS": "2", "LOG_LEVEL": "debug", "LOG_ALL_REQUESTS": "yes"}
        )
        self.assertEqual(settings.seed_samples, 150)
        self.assertEqual(settings.jobs, 2)
        self.assertEqual(settings.log_level, "DEBUG")
        self.assertTrue(settings.log_all_requests)

    def test_override(self):
        """ None keeps the current value """
        settings = Settings(seed=3).override(seed=None, jobs=4)
        self.assertEqual((settings.seed, settings.jobs), (3, 4))

    def test_strtobool(self):
        self.assertTrue(strtobool("On"))
        with self.assertRaises(ValueError):
            strtobool("maybe")


if __name__ == "__main__":
    unittest.main()
