"""Unit constants and conversions.

All internal computation is done in Hartree atomic units; conversion happens
only at I/O boundaries.
"""

HARTREE_TO_CM1 = 219474.63       # 1 a.u. energy in cm^-1
AU_TIME_TO_FS = 0.02418884       # 1 a.u. time in fs

FS_TO_AU = 1.0 / AU_TIME_TO_FS
PS_TO_AU = 1000.0 / AU_TIME_TO_FS


class UnitError(ValueError):
    """Raised for an unsupported unit pair."""


# (from, to) -> multiplicative factor
_CONVERSIONS = {
    ("au", "cm-1"): HARTREE_TO_CM1,
    ("cm-1", "au"): 1.0 / HARTREE_TO_CM1,
    ("au", "fs"): AU_TIME_TO_FS,
    ("fs", "au"): FS_TO_AU,
    ("au", "ps"): AU_TIME_TO_FS / 1000.0,
    ("ps", "au"): PS_TO_AU,
    ("fs", "ps"): 1e-3,
    ("ps", "fs"): 1e3,
}


def convert_units(value, from_unit, to_unit):
    """Convert energy (au <-> cm-1) or time (au <-> fs/ps) values.

    "au" is disambiguated by the other unit of the pair: au <-> cm-1 is an
    energy/frequency conversion, au <-> fs/ps a time conversion.  Any other
    pair raises UnitError.
    """
    if from_unit == to_unit:
        return value
    try:
        factor = _CONVERSIONS[(from_unit, to_unit)]
    except KeyError:
        raise UnitError(f"unsupported unit pair: {from_unit!r} -> {to_unit!r}") from None
    return value * factor
