"""Physical constants and the material database.

Everything in this package works in SI units: meters, volts, F/m^2,
C/m^3, m^-3. Device-physics units (cm^-3, um) are converted exactly once
at the CLI boundary.
"""

from dataclasses import dataclass

# CODATA / SI defined values
Q = 1.602176634e-19       # elementary charge, C
K_B = 1.380649e-23        # Boltzmann constant, J/K
EPS0 = 8.8541878128e-12   # vacuum permittivity, F/m


@dataclass(frozen=True)
class Material:
    """A homogeneous semiconductor: relative permittivity and intrinsic
    carrier concentration (m^-3) quoted at ``temp_ref`` kelvin."""

    name: str
    eps_r: float
    n_i: float
    temp_ref: float

    def __post_init__(self):
        if self.eps_r <= 1.0:
            raise ValueError(f"eps_r must exceed 1, got {self.eps_r}")
        if self.n_i <= 0.0:
            raise ValueError(f"n_i must be positive, got {self.n_i}")
        if self.temp_ref <= 0.0:
            raise ValueError(f"temp_ref must be positive, got {self.temp_ref}")

    @property
    def eps(self) -> float:
        """Absolute permittivity eps0 * eps_r, F/m."""
        return EPS0 * self.eps_r


_BUILTINS = (
    Material("GaAs", 12.9, 2.1e12, 300.0),
    Material("Ge", 16.0, 2.4e19, 300.0),
    Material("Si", 11.7, 1.0e16, 300.0),
)


def builtin_materials() -> list[Material]:
    """Built-in material table, sorted by name. Content is fixed."""
    return list(_BUILTINS)


def get_material(name: str) -> Material:
    """Look up a builtin material by name."""
    for m in _BUILTINS:
        if m.name == name:
            return m
    raise KeyError(f"unknown material {name!r}; builtins: "
                   + ", ".join(m.name for m in _BUILTINS))


def thermal_voltage(temp: float) -> float:
    """k_B * T / q in volts. ``temp`` must be positive kelvin."""
    if temp <= 0.0:
        raise ValueError(f"temperature must be positive, got {temp}")
    return K_B * temp / Q
