"""Surface-format checks for postal codes, phone numbers and websites."""

import re

POSTAL_CODE = re.compile(r"^[A-Za-z]\d[A-Za-z] ?\d[A-Za-z]\d$")
PHONE = re.compile(r"^(\+?1[ .-]?)?(\(\d{3}\)|\d{3})[ .-]?\d{3}[ .-]?\d{4}$")
WEBSITE = re.compile(r"^https?://[A-Za-z0-9-]+(\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,}(/\S*)?$")

PATTERNS = {"PC": POSTAL_CODE, "PHONE": PHONE, "WEBSITE": WEBSITE}


def is_valid(attribute, value):
    """Format validity; attributes without a pattern only need to be nonempty."""
    if not value:
        return False
    pattern = PATTERNS.get(attribute)
    if pattern is None:
        return True
    return pattern.match(value) is not None
