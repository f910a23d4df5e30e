"""Design-space exploration for vector-matrix-multiply hardware.

Quantitatively compares VMM implementations in the time domain, the
analog charge domain, and the digital domain: per-MAC energy,
throughput, silicon area, and compute error as functions of the array
dimension N, input bit width B, parallelism M, and redundancy R, driven
by ingested technology characterization data.
"""

__version__ = "0.1.0"

from .cells import (  # noqa: F401
    CellErrorStats,
    CellSpec,
    InputDistribution,
    cell_error_stats,
    esnr,
    load_cell_spec,
    scale_with_redundancy,
)
from .chains import (  # noqa: F401
    ChainErrorStats,
    ErrorBudget,
    chain_stats,
    solve_redundancy,
    td_cell_area,
    td_latency,
    td_mac_energy,
)
from .tdc import (  # noqa: F401
    TdcParams,
    TdcRange,
    hybrid_tdc_energy,
    optimal_losc,
    reduced_range,
    sar_tdc_energy,
)
from .analog import (  # noqa: F401
    AdcEnvelope,
    AdcSurveyRecord,
    AnalogParams,
    adc_energy,
    analog_mac_energy,
    enob_from_snr,
    fit_adc_envelope,
    solve_analog_redundancy,
)
from .digital import (  # noqa: F401
    DigitalTable,
    digital_mac_energy,
    digital_throughput,
    ingest_digital_table,
    load_digital_table,
)
from .explore import (  # noqa: F401
    SweepConfig,
    SweepResult,
    load_config,
    resnet_scenario,
    run_sweep,
)
from .emit import emit_csv, emit_plot  # noqa: F401
