"""Remote patient monitoring toolkit for intermittently connected clinics.

Subpackages:

* ``instruments`` -- screening survey definitions, response validation, scoring
* ``scheduling``  -- screening cadence and adherence arithmetic
* ``sync``        -- store-and-forward bundle replication between devices
* ``sim``         -- deterministic contact-trace simulator and reporting CLI
* ``ingest``      -- consent-gated sensor observation intake
* ``service``     -- clinic-side API node with event-sourced, audited storage
"""

__version__ = "0.1.0"
