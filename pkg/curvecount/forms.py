from dataclasses import dataclass

from django import forms
from django.conf import settings

COMMANDS = (
    "macmahon",
    "dt0",
    "conifold",
    "gv-expand",
    "gv-extract",
    "gw",
    "check",
    "pade",
    "hall",
    "a2",
)
FORMAT_CHOICES = [("json", "JSON"), ("csv", "CSV"), ("text", "Text")]


@dataclass(frozen=True)
class RunConfig:
    command: str
    format: str = "json"
    t_cutoff: int = None
    q_window: tuple = None
    lambda_order: int = None
    g_max: int = None
    order: int = None
    k: int = None
    input: str = ""
    output: str = ""


class RunConfigForm(forms.Form):
    """Validates the numeric options shared by the curvecount subcommands."""

    command = forms.ChoiceField(choices=[(c, c) for c in COMMANDS])
    format = forms.ChoiceField(choices=FORMAT_CHOICES)
    cutoff = forms.IntegerField(required=False)
    q_lo = forms.IntegerField(required=False)
    q_hi = forms.IntegerField(required=False)
    lambda_order = forms.IntegerField(required=False)
    g_max = forms.IntegerField(required=False)
    order = forms.IntegerField(required=False)
    k = forms.IntegerField(required=False)
    input = forms.CharField(required=False, strip=True)
    output = forms.CharField(required=False, strip=True)

    def _capped(self, name, minimum):
        value = self.cleaned_data.get(name)
        if value is None:
            return value
        if value < minimum:
            raise forms.ValidationError(f"--{name.replace('_', '-')} must be >= {minimum}, got {value}")
        cap = settings.CURVECOUNT_MAX_DEGREE
        if value > cap:
            raise forms.ValidationError(
                f"--{name.replace('_', '-')} {value} exceeds CURVECOUNT_MAX_DEGREE={cap}"
            )
        return value

    def clean_cutoff(self):
        return self._capped("cutoff", 1)

    def clean_order(self):
        return self._capped("order", 0)

    def clean_lambda_order(self):
        return self._capped("lambda_order", -2)

    def clean_k(self):
        return self._capped("k", 1)

    def clean_g_max(self):
        value = self.cleaned_data.get("g_max")
        if value is not None and value < 0:
            raise forms.ValidationError(f"--g-max must be >= 0, got {value}")
        return value

    def clean(self):
        cleaned = super().clean()
        lo, hi = cleaned.get("q_lo"), cleaned.get("q_hi")
        if (lo is None) != (hi is None):
            raise forms.ValidationError("--q-window needs both LO and HI")
        if lo is not None and lo > hi:
            raise forms.ValidationError(f"--q-window LO={lo} exceeds HI={hi}")
        return cleaned

    def error_line(self) -> str:
        messages = []
        for field, errors in self.errors.items():
            for error in errors:
                messages.append(error if field == "__all__" else f"{field}: {error}")
        return "; ".join(messages)

    def to_config(self) -> RunConfig:
        data = self.cleaned_data
        window = None
        if data.get("q_lo") is not None:
            window = (data["q_lo"], data["q_hi"])
        return RunConfig(
            command=data["command"],
            format=data["format"],
            t_cutoff=data.get("cutoff"),
            q_window=window,
            lambda_order=data.get("lambda_order"),
            g_max=data.get("g_max"),
            order=data.get("order"),
            k=data.get("k"),
            input=data.get("input") or "",
            output=data.get("output") or "",
        )
