"""Word lists used to synthesize POI records."""

# Municipalities of the region with coordinate boxes (X, Y ranges) and the
# forward sortation areas (first three postal-code characters) they own.
MUNICIPALITIES = {
    "Mississauga": {
        "share": 0.50,
        "x": (43.550, 43.640),
        "y": (-79.720, -79.560),
        "fsa": ("L4T", "L4W", "L4X", "L4Y", "L4Z", "L5A", "L5B", "L5C", "L5E",
                "L5G", "L5H", "L5J", "L5K", "L5L", "L5M", "L5N", "L5R", "L5V", "L5W"),
        "site": "www.mississauga.ca",
        "areas": ("Meadowvale", "Streetsville", "Port Credit", "Malton", "Cooksville",
                  "Erin Mills", "Clarkson", "Churchill Meadows", "Lisgar", "Applewood",
                  "Erindale", "Lakeview", "Hurontario", "Sheridan"),
        "streets": ("Hurontario St", "Dundas St W", "Burnhamthorpe Rd", "Mavis Rd",
                    "Eglinton Ave W", "Britannia Rd", "Erin Mills Pkwy", "Lakeshore Rd E",
                    "Winston Churchill Blvd", "Derry Rd", "Confederation Pkwy", "Glen Erin Dr"),
    },
    "Brampton": {
        "share": 0.35,
        "x": (43.660, 43.760),
        "y": (-79.840, -79.680),
        "fsa": ("L6P", "L6R", "L6S", "L6T", "L6V", "L6W", "L6X", "L6Y", "L6Z", "L7A"),
        "site": "www.brampton.ca",
        "areas": ("Bramalea", "Springdale", "Heart Lake", "Castlemore", "Fletcher's Meadow",
                  "Mount Pleasant", "Sandringham", "Gore Meadows", "Churchville", "Snelgrove"),
        "streets": ("Queen St E", "Main St N", "Bovaird Dr", "Steeles Ave", "Sandalwood Pkwy",
                    "Chinguacousy Rd", "Kennedy Rd", "Williams Pkwy", "Vodden St", "Airport Rd"),
    },
    "Caledon": {
        "share": 0.15,
        "x": (43.780, 43.940),
        "y": (-80.020, -79.740),
        "fsa": ("L7C", "L7E", "L7K", "L0N"),
        "site": "www.caledon.ca",
        "areas": ("Bolton", "Caledon East", "Inglewood", "Alton", "Palgrave",
                  "Cheltenham", "Belfountain", "Mono Mills", "Valleywood"),
        "streets": ("Old Church Rd", "Highway 50", "Charleston Sideroad", "King St",
                    "Mayfield Rd", "Kennedy Rd", "Hurontario St", "Queen St S", "Airport Rd"),
    },
}

# Overall X/Y box covering every municipality box above.
REGION_BOX = (43.50, 44.00, -80.10, -79.50)

CATEGORIES = (
    "Arts, Museum and Cultural Spaces",
    "Emergency Responder Station",
    "Institutional Building",
    "Hospital and Medical Centre",
    "Housing",
    "Food Bank",
    "Long Term Care and Retirement Home",
    "Post Office",
    "Recreation Centre",
    "Settlement Services",
    "Shopping Centre",
    "Transportation",
)

# Name nouns per category; real names pair a local area with one of these.
CATEGORY_NOUNS = {
    "Arts, Museum and Cultural Spaces": ("Museum", "Arts Centre", "Gallery", "Heritage House"),
    "Emergency Responder Station": ("Fire Station", "Police Division", "Paramedic Station"),
    "Institutional Building": ("Library", "City Hall", "Court House", "Service Centre"),
    "Hospital and Medical Centre": ("Hospital", "Medical Centre", "Walk-in Clinic", "Health Centre"),
    "Housing": ("Co-operative Homes", "Housing", "Shelter", "Residences"),
    "Food Bank": ("Food Bank", "Community Pantry"),
    "Long Term Care and Retirement Home": ("Long Term Care", "Retirement Residence", "Manor"),
    "Post Office": ("Post Office", "Postal Outlet"),
    "Recreation Centre": ("Community Centre", "Arena", "Pool", "Recreation Centre"),
    "Settlement Services": ("Newcomer Centre", "Settlement Services", "Welcome Centre"),
    "Shopping Centre": ("Plaza", "Shopping Centre", "Town Centre", "Mall"),
    "Transportation": ("GO Station", "Bus Terminal", "Transit Hub"),
}

STREET_NUMBER_RANGE = (1, 9999)
UNIT_PREFIXES = ("Unit", "Suite")

LOCAL_AREA_CODES = ("905", "289", "365")

# Generic surname-like words used for fabricated names, streets and domains.
SURNAMES = (
    "Smith", "Johnson", "Williams", "Brown", "Jones", "Garcia", "Miller", "Davis",
    "Wilson", "Anderson", "Taylor", "Thomas", "Moore", "Martin", "Jackson", "White",
    "Harris", "Clark", "Lewis", "Walker", "Hall", "Young", "King", "Wright", "Scott",
    "Green", "Baker", "Adams", "Nelson", "Hill", "Campbell", "Mitchell", "Roberts",
    "Carter", "Phillips", "Evans", "Turner", "Parker", "Collins", "Edwards",
)
STREET_SUFFIXES = ("St", "Ave", "Rd", "Dr", "Blvd", "Cres", "Crt", "Way", "Lane", "Pkwy")
FAKE_UNIT_PREFIXES = ("Suite", "Unit", "Apt.")
CITIES = (
    "Toronto", "Ottawa", "Hamilton", "London", "Kitchener", "Windsor", "Guelph",
    "Barrie", "Oshawa", "Kingston", "Sudbury", "Markham", "Vaughan", "Oakville",
    "Burlington", "Milton", "Halton Hills", "Orangeville", "Port Kevin", "Lake Sarah",
    "North Jamesfort", "Montreal", "Calgary", "Vancouver", "Winnipeg", "Halifax",
)
PROVINCES = ("ON", "QC", "BC", "AB", "MB", "SK", "NS", "NB", "NL", "PE", "YT", "NT", "NU")
WEB_TLDS = ("com", "net", "org", "biz", "info", "ca")
AREA_CODES = ("416", "647", "613", "519", "705", "807", "514", "604", "403", "204", "902", "905")
