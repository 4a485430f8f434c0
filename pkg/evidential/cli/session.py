from dataclasses import dataclass, field
from typing import Optional

from evidential.network.belief_network import BeliefNetwork
from evidential.services.knowledge_base import KnowledgeBaseService


@dataclass
class Session:
    """State carried from one command to the next.

    Only ``load`` and ``--net`` replace the network; queries work on amended
    copies, so no temporary query node survives a command.
    """

    service: KnowledgeBaseService = field(default_factory=KnowledgeBaseService)
    digits: Optional[int] = None
    interactive: bool = False

    @property
    def network(self) -> Optional[BeliefNetwork]:
        return self.service.network
