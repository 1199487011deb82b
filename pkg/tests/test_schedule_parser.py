import pytest

from utils.errors import ScheduleError
from utils.schedule_parser import ScheduleParser


@pytest.mark.parametrize('text, expected', [
    ("5,10,25", [5, 10, 25]),
    (" 5 , 10 ", [5, 10]),
    ("10:50:10", [10, 20, 30, 40, 50]),
    ("1:3", [1, 2, 3]),
    ("2,5:7,100", [2, 5, 6, 7, 100]),
])
def test_parse(text, expected):
    assert list(ScheduleParser.parse(text)) == expected


@pytest.mark.parametrize('text', [None, "", "5,,10", "10,5", "5,5", "a,b", "-1,2", "0", "5:10:0"])
def test_parse_rejects(text):
    with pytest.raises(ScheduleError):
        ScheduleParser.parse(text)


def test_parse_respects_cap():
    with pytest.raises(ScheduleError):
        ScheduleParser.parse("10,100", cap=50)
    assert list(ScheduleParser.parse("10,50", cap=50)) == [10, 50]


def test_dyadic():
    assert ScheduleParser.dyadic(16, 256) == [16, 32, 64, 128, 256]
    assert ScheduleParser.dyadic(16, 65536)[-1] == 65536
    with pytest.raises(ScheduleError):
        ScheduleParser.dyadic(0, 10)
