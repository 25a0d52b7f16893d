from django.apps import AppConfig


class CurveCountConfig(AppConfig):
    name = "curvecount"
    verbose_name = "Curve counting series"
