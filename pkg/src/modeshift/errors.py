"""Exception and warning types raised across the package."""


class ModeshiftError(Exception):
    """Base class for every error raised by modeshift."""


class MidiError(ModeshiftError):
    """Input bytes could not be decoded as a supported Standard MIDI File."""


class MalformedHeader(MidiError):
    pass


class UnsupportedFormat(MidiError):
    pass


class TruncatedTrack(MidiError):
    pass


class MalformedTrack(MidiError):
    """Event data inside a track chunk is invalid (bad status or data byte)."""


class TooManyBars(MidiError):
    """Bar segmentation would exceed ``midi.MAX_BARS``."""


class NoMelodyTrack(ModeshiftError):
    pass


class EmptyPiece(ModeshiftError):
    pass


class EmptyTrace(ModeshiftError):
    pass


class EmptyCorpus(ModeshiftError):
    pass


class DanglingNoteOn(UserWarning):
    """A note-on was never closed and has been ended at the end of its track."""
