from enum import Enum


class TokMode(str, Enum):
    ENGLISH = "english"
    APOSTROPHE_PRESERVING = "apostrophe-preserving"
