import logging
import os
import time

from flask import Flask, g, request
from flask_cors import CORS

from toric_residues.api import api
from toric_residues.config import Settings

logger = logging.getLogger(__name__)


def config_app(app):
    settings = Settings.from_env()
    app.config["SETTINGS"] = settings
    app.config["LOG_ALL_REQUESTS"] = settings.log_all_requests

    # Restplus API
    app.config["ERROR_404_HELP"] = False
    app.config["RESTX_MASK_SWAGGER"] = False


def create_app():
    app = Flask(__name__)
    CORS(app, resources={r"/*": {"origins": "*"}})

    config_app(app)

    api.init_app(
        app,
        title="Toric Residues API",
        description="Validate problems, compute residue mirror map series, run the identity suite "
        "and compute mixed volumes of nef-partitions.",
    )

    # Log each request
    if app.config["LOG_ALL_REQUESTS"]:
        # pylint: disable=unused-variable
        @app.before_request
        def before_request():
            g.start = time.time()

        # pylint: disable=unused-variable
        @app.after_request
        def log_request(response):
            exec_time = round(time.time() - g.start, 3)
            log_message = "{} {} {} {} {}".format(
                request.method,
                request.full_path,
                request.scheme,
                response.status,
                f"({exec_time} secs)",
            )
            if response.status_code >= 400 and response.status_code < 600:
                logger.error(log_message)
            else:
                logger.info(log_message)
            return response

    logger.info("Created Flask API")

    return app


if __name__ == "__main__":

    import argparse

    parser = argparse.ArgumentParser(description="Start the toric residues service")
    parser.add_argument("--port", type=int, default=int(os.environ.get("PORT", 5000)))

    args = parser.parse_args()

    logging.basicConfig(level=Settings.from_env().log_level)
    app = create_app()
    app.run(host="0.0.0.0", port=args.port)
