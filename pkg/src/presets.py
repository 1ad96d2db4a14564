from scenarios import ScenarioConfig, config_from_dict

# Shared drive and chain for every scenario
BASE = {"J": "pi/4", "mu": "pi/10", "n": 8}
CYCLES = 15

KINKS = [{"name": "kink_density"}]
MESON_SCATTERING = [{"name": "spin_flip_density"}, {"name": "meson_number", "indices": [1, 4]}]

PRESETS = {
    # single kink: ballistic (a) vs Bloch-oscillating (b)
    "fig2a": {"initial": "10000000", "h": "0", "observables": KINKS},
    "fig2b": {"initial": "10000000", "h": "pi/10", "observables": KINKS},
    # 1-meson: unbound (c) vs bound (d)
    "fig2c": {"initial": "00010000", "h": "0", "observables": KINKS},
    "fig2d": {"initial": "00010000", "h": "pi/8", "observables": KINKS},
    "fig3": {
        "initial": "00111100",
        "h": "pi/4",
        "observables": KINKS + [{"name": "total_spin_flips"}, {"name": "total_kinks"}, {"name": "meson_histogram"}],
    },
    "fig4_h8": {"initial": "00100100", "h": "pi/8", "observables": MESON_SCATTERING},
    "fig4_h4": {"initial": "00100100", "h": "pi/4", "observables": MESON_SCATTERING},
    "fig4_ham_h8": {"initial": "00100100", "h": "pi/8", "observables": MESON_SCATTERING, "engine": "HAMILTONIAN"},
    "fig4_ham_h4": {"initial": "00100100", "h": "pi/4", "observables": MESON_SCATTERING, "engine": "HAMILTONIAN"},
    # adjacent 2-meson and a 4-meson touching the left edge
    "sm_2meson": {"initial": "00011000", "h": "pi/4", "observables": KINKS + [{"name": "meson_histogram"}]},
    "sm_edge4": {
        "initial": "11110000",
        "h": "pi/4",
        "observables": KINKS + [{"name": "total_spin_flips"}, {"name": "total_kinks"}, {"name": "meson_histogram"}],
    },
}


def preset_names() -> list[str]:
    """Preset names in declaration order."""
    return list(PRESETS)


def preset_dict(name: str) -> dict:
    """Config document for a preset, in the same shape a YAML scenario file has."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; known presets: {', '.join(PRESETS)}")
    entry = PRESETS[name]
    return {
        "name": name,
        "engine": entry.get("engine", "FLOQUET"),
        "params": {**BASE, "h": entry["h"]},
        "initial": entry["initial"],
        "cycles": CYCLES,
        "observables": [dict(spec) for spec in entry["observables"]],
    }


def get_preset(name: str) -> ScenarioConfig:
    """Validated config for a preset."""
    return config_from_dict(preset_dict(name))
