"""One-shot information theory on finite alphabets."""

__version__ = "0.1.0"

from .capacity import (
    CapacityBounds,
    Code,
    asymptotic_capacity,
    build_code,
    capacity_bounds,
    capacity_lower,
    capacity_upper,
    cmin_maximize,
    evaluate_code,
)
from .common import (
    CminResult,
    CommonPartition,
    c_ext_bounds,
    c_min_bounds,
    c_min_lower,
    c_min_upper,
    common_entropy,
    common_min_entropy,
    gacs_korner,
)
from .errors import *  # noqa: F401,F403
from .oracle import (
    OracleBudget,
    exact_best_code,
    exact_c_ext,
    exact_c_min,
    exact_one_shot_capacity,
    exact_smooth_entropy,
    uniform_decomposition,
)
from .prob import (
    Channel,
    JointDistribution,
    ProbVector,
    SubProbVector,
    conditional_x_given_y,
    joint_from_channel,
    marginal_x,
    marginal_y,
    validate,
)
from .smooth import (
    SmoothingReport,
    h_max,
    h_max_cond,
    h_min,
    h_min_cond,
    smooth_h_max,
    smooth_h_max_cond,
    smooth_h_min,
    smooth_h_min_cond,
)
from .tasks import TaskReport, compress_with_side_info, extract, extract_common
from .zoo import ChannelSpec, make_channel, make_joint
