"""
TreeCode Hub - Error Types
Exceptions raised by the tree, codec, analysis and routing modules
"""

from typing import Optional


class TreeCodeError(Exception):
    """Base class for every domain error raised by TreeCode Hub"""

    def __init__(self, message: str, position: Optional[int] = None):
        self.message = message
        self.position = position
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.position is None:
            return self.message
        return f"{self.message} (at position {self.position})"


class TreeStructureError(TreeCodeError):
    """Raised for invalid parent arrays and malformed parent-array text"""


class NewickError(TreeCodeError):
    """Raised when Newick text cannot be parsed or emitted"""


class CodecError(TreeCodeError):
    """Raised when a codeword cannot be decoded"""


class PacketError(TreeCodeError):
    """Raised for malformed routing packets"""


class RoutingTableError(TreeCodeError):
    """Raised for inconsistent path-vector tables"""


class ConfigError(TreeCodeError):
    """Raised when the configuration file is unreadable"""


class UsageError(TreeCodeError):
    """Raised for invalid command-line usage"""


class AnalysisError(TreeCodeError):
    """Raised for out-of-range benchmark and analysis parameters"""
