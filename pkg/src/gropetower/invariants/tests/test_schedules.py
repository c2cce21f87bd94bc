import pytest
from hypothesis import given
from hypothesis import strategies as st

from ..exceptions import PreconditionError
from ..gropes import model_grope
from ..gropes import product
from ..schedules import AbrsSchedule
from ..schedules import Level
from ..schedules import handle_count
from ..schedules import level_euler_characteristic
from ..schedules import level_handles
from ..schedules import schedule_frame
from ..schedules import schedule_of


@pytest.mark.parametrize("text,handles", [
    ('A{1}', 1), ('A{3}', 5), ('B', 0), ('R{1}', 0), ('R{4}', 3), ('S', 1),
])
def test_level_handles(text, handles):
    level = Level.parse(text)
    assert str(level) == text
    assert level_handles(level) == handles


@pytest.mark.parametrize("kind,param", [('A', None), ('R', 0), ('B', 2), ('Q', 1)])
def test_invalid_levels(kind, param):
    with pytest.raises(ValueError):
        Level(kind, param)


def test_satellite_schedule():
    schedule = schedule_of(model_grope(1, cap_strands=1), 'pushed_3d_satellite')
    assert str(schedule) == '[A{1}, R{1}, B, R{1}, B]'
    assert handle_count(schedule) == 1


def test_satellite_schedule_height_two():
    schedule = schedule_of(model_grope(2, cap_strands=1), 'pushed_3d_satellite')
    assert [lev.kind for lev in schedule].count('A') == 3
    assert handle_count(schedule) == 3


def test_concordance_schedule():
    G = model_grope(1, boundary_components=2, cap_strands=1)
    schedule = schedule_of(G, 'pushed_3d_concordance')
    assert str(schedule) == '[S, A{1}, R{1}, B, R{1}, B]'
    assert handle_count(schedule) == 2
    with pytest.raises(PreconditionError, match="disk-like"):
        schedule_of(G, 'pushed_3d_satellite')


def test_product_schedule():
    G1 = model_grope(1, label='P')
    G2 = model_grope(1, cap_strands=1)
    schedule = schedule_of(product(G1, G2), 'product',
                           ((G1, 'pushed_3d_satellite'), (G2, 'pushed_3d_satellite')))
    assert str(schedule) == '[A{1}, R{1}, A{1}, R{1}, A{1}]'
    assert handle_count(schedule) == 3


def test_product_schedule_checks_height():
    G1 = model_grope(1, label='P')
    G2 = model_grope(1, cap_strands=1)
    with pytest.raises(PreconditionError, match="not the product"):
        schedule_of(G2, 'product', ((G1, 'pushed_3d_satellite'), (G2, 'pushed_3d_satellite')))
    with pytest.raises(PreconditionError, match="two factors"):
        schedule_of(G2, 'product', ((G1, 'pushed_3d_satellite'),))


def test_unknown_kind():
    with pytest.raises(PreconditionError):
        schedule_of(model_grope(1), 'pushed_4d')


def test_schedule_frame():
    frame = schedule_frame(AbrsSchedule(('A{2}', 'B', 'R{3}')))
    assert list(frame.columns) == ['level', 'parameters', 'handle_count']
    assert list(frame['level']) == ['A', 'B', 'R']
    assert list(frame['parameters']) == ['2', '', '3']
    assert frame['handle_count'].sum() == 5


levels = st.one_of(
    st.integers(min_value=1, max_value=6).map(lambda g: Level('A', g)),
    st.integers(min_value=1, max_value=6).map(lambda k: Level('R', k)),
    st.just(Level('B')),
    st.just(Level('S')),
)


@given(st.lists(levels, max_size=12))
def test_handle_count_is_minus_euler_characteristic(items):
    schedule = AbrsSchedule(tuple(items))
    assert handle_count(schedule) == -sum(level_euler_characteristic(lev) for lev in schedule)
