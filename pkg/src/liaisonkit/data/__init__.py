"""Bundled dictionary files (topic lists, sentiment polarity, uncertainty)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..classify import SentimentLexicon, TopicDictionary


def dictionaries_path() -> Path:
    return Path(resources.files(__package__) / "dictionaries")


def bundled_dictionary(name: str) -> TopicDictionary:
    return TopicDictionary.from_file(dictionaries_path() / f"{name}.txt")


def bundled_lexicon() -> SentimentLexicon:
    base = dictionaries_path()
    return SentimentLexicon.from_files(
        base / "sentiment_positive.txt", base / "sentiment_negative.txt"
    )
