"""Value-based learners: tabular/linear Q, TD targets with cascading
curricula, independent/hysteretic/joint updates, and the training loops."""

from .ict import (
    SWITCH_NO_PASS,
    CoordinationSwitcher,
    CurriculumLearnerSet,
    SwitcherRecorder,
    build_curriculum_set,
    build_switcher,
    ict_act,
    ict_decide,
)
from .qfunction import LinearQ, TabularQ, make_obs_key, make_q
from .spaces import (
    ActionSpace,
    index_lookup,
    reduced_scene_space,
    scene_space,
    switcher_space,
    union_space,
)
from .targets import EtaSchedule, max_over_legal, td_target_base, td_target_cascade
from .training import (
    ALGORITHMS,
    MetricsRow,
    TrainConfig,
    Trainer,
    TrainResult,
    train_ict,
)
from .updates import select_action, update_hyq, update_iql, update_vdn, vdn_q_tot

__all__ = [
    "SWITCH_NO_PASS", "CoordinationSwitcher", "CurriculumLearnerSet",
    "SwitcherRecorder", "build_curriculum_set", "build_switcher", "ict_act",
    "ict_decide", "LinearQ", "TabularQ", "make_obs_key", "make_q",
    "ActionSpace", "index_lookup", "reduced_scene_space", "scene_space",
    "switcher_space", "union_space", "EtaSchedule", "max_over_legal",
    "td_target_base", "td_target_cascade", "ALGORITHMS", "MetricsRow",
    "TrainConfig", "Trainer", "TrainResult", "train_ict", "select_action",
    "update_hyq", "update_iql", "update_vdn", "vdn_q_tot",
]
