"""csforge: code-switching corpus engineering.

Generation of code-switched text under syntactic constraints via a
multi-agent generate-evaluate-refine pipeline, plus semantic-aware
scoring of code-switching ASR output (SAER alongside WER/CER).
"""

from csforge.languages import Language, ScriptClass, script_class_of

__version__ = "0.1.0"

__all__ = ["Language", "ScriptClass", "script_class_of", "__version__"]
