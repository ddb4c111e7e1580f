from .SpectrumController import SpectrumController
from .LimitsController import LimitsController
from .MixtureController import MixtureController
from .DiscretizeController import DiscretizeController
from .AsymptoticsController import EdgeworthController, SaddlepointController
from .LogisticController import LogisticController

CONTROLLERS = {
    'spectrum': SpectrumController,
    'limits': LimitsController,
    'fit-mixture': MixtureController,
    'discretize': DiscretizeController,
    'edgeworth': EdgeworthController,
    'saddlepoint': SaddlepointController,
    'embed-logistic': LogisticController,
}
